"""Compare the compiled kernels with the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Shapes follow the default planted dataset: 20 trials, 16 channels,
200 samples, 9 in-band frequency bins.
"""
import argparse
import timeit

import numpy as np

from netstate import _pykernels

try:
    from netstate import _ckernels
except ImportError:
    _ckernels = None


def bench(label, fn, repeat):
    best = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"  {label:<8s} {best * 1e3:9.1f} ms")
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--channels", type=int, default=16)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--bins", type=int, default=9)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled kernels not built; only the fallback is timed")

    phase = rng.uniform(-np.pi, np.pi, (args.trials, args.channels, args.samples * args.bins))
    print(f"plv_all_pairs  phase {phase.shape}")
    times = {name: bench(name, lambda m=mod: m.plv_all_pairs(phase), args.repeat) for name, mod in backends}
    if len(times) == 2:
        diff = np.abs(_ckernels.plv_all_pairs(phase) - _pykernels.plv_all_pairs(phase)).max()
        print(f"  speedup  {times['python'] / times['cython']:9.2f}x   max abs diff {diff:.1e}")

    sig = rng.standard_normal((args.channels, args.samples)).astype(complex)
    print(f"lag_products   signals {sig.shape}")
    times = {name: bench(name, lambda m=mod: m.lag_products(sig), args.repeat) for name, mod in backends}
    if len(times) == 2:
        diff = np.abs(_ckernels.lag_products(sig) - _pykernels.lag_products(sig)).max()
        print(f"  speedup  {times['python'] / times['cython']:9.2f}x   max abs diff {diff:.1e}")


if __name__ == "__main__":
    main()
