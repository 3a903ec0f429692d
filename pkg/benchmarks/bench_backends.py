#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against the pure-Python
fallback on the two hot paths: hypergeometric series summation and the
Robin shooting integration.

Usage: python benchmarks/bench_backends.py [repeats]
"""

import sys
import time

from conelab import _pykernels

try:
    from conelab import _kernels
except ImportError:
    _kernels = None


SERIES_CASES = [
    ("profile n=9, k=4 near the root", (4.0, -0.5, 2.0, 0.6355)),
    ("high-dimension profile n=2000", (999.5, -0.5, 500.0, 0.515)),
    ("subsolution profile n=200, d=40", (1.0, 98.0, 80.0, 0.9)),
]

# lambda1 shot for the axisymmetric 7-dimensional cone
SHOOT_ARGS = (1.0, -5.6984e-6, 1e-6, 0.5173305416768469,
              7.0, 1.0, -5.6984022, 0.0, 0.0, 1e-11, 1e-300, 0.0323, 2_000_000)


def time_call(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        tic = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - tic)
    return best


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 50
    if _kernels is None:
        print("compiled kernels unavailable; timing the fallback only")
    rows = []
    for label, (a, b, c, s) in SERIES_CASES:
        args = (a, b, c, s, 1e-15, 1e-280, 40000)
        t_py = time_call(_pykernels.hyp2f1_series, args, repeats)
        t_c = time_call(_kernels.hyp2f1_series, args, repeats) if _kernels else None
        rows.append((f"series: {label}", t_py, t_c))
    t_py = time_call(_pykernels.robin_shoot, SHOOT_ARGS, max(3, repeats // 10))
    t_c = (time_call(_kernels.robin_shoot, SHOOT_ARGS, repeats)
           if _kernels else None)
    rows.append(("shoot: lambda1 trajectory (7,1)", t_py, t_c))

    width = max(len(r[0]) for r in rows)
    print(f"{'case':<{width}}  {'python':>12}  {'compiled':>12}  {'speedup':>8}")
    for label, t_py, t_c in rows:
        if t_c is None:
            print(f"{label:<{width}}  {t_py * 1e6:>10.1f}us  {'-':>12}  {'-':>8}")
        else:
            print(f"{label:<{width}}  {t_py * 1e6:>10.1f}us  {t_c * 1e6:>10.1f}us"
                  f"  {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
