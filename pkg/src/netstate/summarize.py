"""One topographic network per state via time- and subject-mode projection."""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidIndexError, InvalidInputError
from .multiway import mode_factor


@dataclass
class StateSummary:
    map: np.ndarray
    k_index: int
    l_index: int
    edges: list = field(default_factory=list)
    degrees: np.ndarray = None
    weighted_degrees: np.ndarray = None
    t1: int = None
    t2: int = None
    label: int = None


def _values(g):
    return np.asarray(getattr(g, "values", g), dtype=float)


def interval_tensor(g, t1, t2):
    """Sub-tensor for 1-based inclusive time bins ``t1..t2``."""
    values = _values(g)
    n_time = values.shape[2]
    if not 1 <= t1 <= t2 <= n_time:
        raise InvalidIndexError(f"interval ({t1}, {t2}) outside 1..{n_time}")
    return values[:, :, t1 - 1:t2, :]


def summarize_state(g, t1, t2, k_index=1, l_index=1):
    """Project the interval tensor onto the k-th time and l-th subject singular vectors.

    Returns the symmetrised N x N map.
    """
    sub = interval_tensor(g, t1, t2)
    n_len, n_subj = sub.shape[2], sub.shape[3]
    if not 1 <= k_index <= n_len:
        raise InvalidIndexError(f"k_index {k_index} outside 1..{n_len}")
    if not 1 <= l_index <= n_subj:
        raise InvalidIndexError(f"l_index {l_index} outside 1..{n_subj}")
    u_time = mode_factor(sub, 2)[0][:, k_index - 1]
    u_subj = mode_factor(sub, 3)[0][:, l_index - 1]
    m = np.einsum("ijts,t,s->ij", sub, u_time, u_subj)
    return 0.5 * (m + m.T)


def edge_count(n_nodes, q):
    """``ceil(q * N(N-1)/2)`` in exact decimal arithmetic."""
    pairs = n_nodes * (n_nodes - 1) // 2
    return min(pairs, math.ceil(Fraction(str(q)) * pairs))


def threshold_edges(map_, q=0.01, rank_by="value"):
    """Top ``q`` fraction of upper-triangle entries as ``(i, j, weight)``.

    Ranked by signed value or, with ``rank_by="abs"``, by magnitude; ties go
    to the lexicographically smaller ``(i, j)``.
    """
    m = np.asarray(map_, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"map must be square, got {m.shape}")
    if not 0 < q < 1:
        raise InvalidInputError(f"quantile must lie in (0, 1), got {q}")
    if rank_by not in ("value", "abs"):
        raise InvalidInputError(f"rank_by must be 'value' or 'abs', got {rank_by!r}")
    iu, ju = np.triu_indices(m.shape[0], k=1)
    w = m[iu, ju]
    key = w if rank_by == "value" else np.abs(w)
    order = np.lexsort((ju, iu, -key))
    keep = order[: edge_count(m.shape[0], q)]
    return [(int(iu[e]), int(ju[e]), float(w[e])) for e in keep]


def node_degrees(edges, n_nodes):
    deg = np.zeros(n_nodes, dtype=np.int64)
    for i, j, _ in edges:
        deg[i] += 1
        deg[j] += 1
    return deg


def summarize(g, t1, t2, k_index=1, l_index=1, q=0.01, rank_by="value", label=None):
    m = summarize_state(g, t1, t2, k_index, l_index)
    edges = threshold_edges(m, q, rank_by)
    return StateSummary(map=m, k_index=k_index, l_index=l_index, edges=edges,
                        degrees=node_degrees(edges, m.shape[0]),
                        weighted_degrees=m.sum(axis=1), t1=t1, t2=t2, label=label)
