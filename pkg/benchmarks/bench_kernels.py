"""Benchmark the compiled walk kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--n 2000] [--trials 400] [--reps 5]
"""

import argparse
import time

import numpy as np

from rmplab import example_measure
from rmplab.kernels import get_backend
from rmplab.measure import RngStream
from rmplab.walks import index_matrix


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--trials", type=int, default=400)
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    py = get_backend("python")
    try:
        cy = get_backend("compiled")
    except RuntimeError:
        cy = None
        print("compiled kernel unavailable; benchmarking the fallback only")

    spec = example_measure(2)
    atoms = spec.atoms_numpy()
    idx = index_matrix(spec, RngStream(1), args.trials, args.n)
    grid = np.array([args.n], dtype=np.int64)
    x0 = np.array([0.3, 1.0, -0.2])

    cases = [
        ("left_products", lambda b: b.left_products(atoms, idx, grid)),
        ("right_products", lambda b: b.right_products(atoms, idx, grid)),
        ("vector_left_walk", lambda b: b.vector_left_walk(atoms, idx, x0, grid)),
        ("qr_deflation", lambda b: b.qr_deflation(atoms, idx, 8)),
    ]

    print(f"n={args.n} trials={args.trials} reps={args.reps} (best-of timings)")
    header = f"{'kernel':<20}{'python':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, call in cases:
        t_py = _time(lambda: call(py), args.reps)
        if cy is not None:
            t_cy = _time(lambda: call(cy), args.reps)
            print(f"{name:<20}{t_py:>11.4f}s{t_cy:>11.4f}s{t_py / t_cy:>9.2f}x")
        else:
            print(f"{name:<20}{t_py:>11.4f}s{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
