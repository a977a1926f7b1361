#!/usr/bin/env python3
"""Benchmark the compiled fast core against the pure-Python (numpy) core.

The hot kernel is the half-line log-Gram assembly: one scaled-Bessel
evaluation per matrix entry.  Continuous (all-distinct) time coordinates
are the worst case; gridded daily data collapses to a handful of distinct
times and is shown separately as the end-to-end product-Gram cost.

Usage:
    python benchmarks/bench_backends.py [--sizes 500,1000,2000] [--repeats 3]
"""

import argparse
import time

import numpy as np

from halflinegp import _pycore
from halflinegp.halfline import HalfLineParams
from halflinegp.spacetime import GaussianParams, ProductKernelParams, SpaceTimePoint, product_gram

try:
    from halflinegp import _fastcore
except ImportError:
    _fastcore = None

PARAMS = HalfLineParams(alpha=-0.5, delta=0.455, omega=0.7)


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_log_gram(sizes, repeats):
    rng = np.random.default_rng(0)
    print(f"{'n':>6} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n in sizes:
        t = rng.uniform(0.0, 7.0, n)
        py = _time(lambda: _pycore.halfline_log_gram(
            PARAMS.alpha, PARAMS.delta, PARAMS.omega, t, t), repeats)
        if _fastcore is not None:
            cy = _time(lambda: _fastcore.halfline_log_gram(
                PARAMS.alpha, PARAMS.delta, PARAMS.omega, t, t), repeats)
            print(f"{n:>6} {py:>11.3f}s {cy:>11.3f}s {py / cy:>8.1f}x")
        else:
            print(f"{n:>6} {py:>11.3f}s {'n/a':>12} {'n/a':>9}")


def bench_product_gram(n_per_day, days, repeats):
    rng = np.random.default_rng(1)
    side = int(np.ceil(np.sqrt(n_per_day)))
    pts = [SpaceTimePoint(x=(float(i % side), float(i // side)), t=float(d))
           for d in range(days) for i in range(n_per_day)]
    kp = ProductKernelParams(GaussianParams(0.01), PARAMS)
    elapsed = _time(lambda: product_gram(kp, pts), repeats)
    n = len(pts)
    print(f"\nproduct gram, gridded ({n} points, {days} distinct days, "
          f"active backend): {elapsed:.3f}s")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="500,1000,2000",
                    help="comma-separated Gram sizes for the continuous-time case")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print("half-line log-Gram, continuous times (one Bessel per entry):")
    if _fastcore is None:
        print("note: compiled core not built; showing the fallback only")
    bench_log_gram(sizes, args.repeats)
    bench_product_gram(812, 7, max(1, args.repeats - 1))


if __name__ == "__main__":
    main()
