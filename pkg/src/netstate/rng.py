"""Counter-based random streams.

Every consumer asks for a stream by ``(seed, *path)``; the path is folded
into a Philox key via :class:`numpy.random.SeedSequence`, so draws never
depend on the order in which streams are created or on thread scheduling.
"""
import zlib

import numpy as np


def _word(part):
    if isinstance(part, (int, np.integer)):
        return int(part)
    return zlib.crc32(str(part).encode())


def rng_for(seed, *path):
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(_word(p) for p in path))
    return np.random.Generator(np.random.Philox(seq))
