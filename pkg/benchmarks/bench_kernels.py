"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel with the best time of each backend and the
speedup, after checking that both backends agree (to rounding for min_slack).
"""

import argparse
import timeit

import numpy as np

from credalvol import _kernels_py, kernels
from credalvol.simplex import simplex


def _cases(rng):
    P = simplex(5)
    normals, offsets = P.halfspaces
    lo, hi = P.coords.min(axis=0), P.coords.max(axis=0)
    pts = lo + (hi - lo) * rng.random((1_000_000, P.k))
    cand = rng.random((20_000, 3))
    order = rng.permutation(len(cand)).astype(np.int64)
    return {
        "count_inside (1e6 pts, d=5)": lambda impl: kernels.count_inside(
            pts, normals, offsets, 1e-9, impl=impl),
        "min_slack (1e6 pts, d=5)": lambda impl: kernels.min_slack(
            pts, normals, offsets, impl=impl),
        "greedy_select (2e4 cands, 3-D)": lambda impl: kernels.greedy_select(
            cand, order, 0.05, impl=impl),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not kernels.compiled_available():
        print("compiled extension not built; only the fallback is available")
        return 1
    from credalvol import _kernels as compiled

    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'cython [s]':>11s} {'python [s]':>11s} {'speedup':>8s}")
    for name, fn in _cases(rng).items():
        a, b = fn(compiled), fn(_kernels_py)
        if not np.allclose(np.asarray(a), np.asarray(b), rtol=0, atol=1e-12):
            raise SystemExit(f"{name}: backends disagree")
        tc = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        print(f"{name:34s} {tc:11.4f} {tp:11.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
