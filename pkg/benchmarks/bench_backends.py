"""Compare the jit and numpy kernel backends on both hot paths.

Runs the simplex QP solver and the triangle-inequality scan at a few
problem sizes, once per backend, and prints a timing table.  The jit
path includes a warm-up call so compilation time is not counted.

Usage: python3 benchmarks/bench_backends.py [--sizes 64,256,1024]
"""

import argparse
import time

import numpy as np

from magnitude import _backend


def _random_similarity(rng, n):
    pts = rng.random((n, 3)) * 4.0
    d = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2)
    return np.exp(-d)


def _random_metric(rng, n):
    pts = rng.random((n, 2)) * 3.0
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def _time(fn, *args, repeats=3):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="64,256,1024")
    parser.add_argument("--tol", type=float, default=1e-7)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = np.random.default_rng(7)
    active = _backend.backend_name()
    print(f"active backend: {active}")
    if active == "numpy":
        print("jit backend unavailable; numpy timings only\n")

    # warm-up triggers compilation when the jit path is active
    z0 = _random_similarity(rng, 8)
    _backend.fw_away_qp(z0, 1e-6, 1000)
    _backend.first_triangle_violation(_random_metric(rng, 8), 1e-12)

    header = f"{'kernel':<16}{'n':>6}{'numpy (s)':>12}{active + ' (s)':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for n in sizes:
        z = _random_similarity(rng, n)
        t_py = _time(_backend._fw_away_qp_py, z, args.tol, 200_000)
        t_jit = _time(_backend.fw_away_qp, z, args.tol, 200_000)
        print(f"{'qp_solver':<16}{n:>6}{t_py:>12.4f}{t_jit:>12.4f}{t_py / t_jit:>10.2f}x")

    for n in sizes:
        d = _random_metric(rng, n)
        # worst case for the scan: a valid metric forces the full triple loop
        t_py = _time(_backend._first_triangle_violation_py, d, 1e-12)
        t_jit = _time(_backend.first_triangle_violation, d, 1e-12)
        print(f"{'triangle_scan':<16}{n:>6}{t_py:>12.4f}{t_jit:>12.4f}{t_py / t_jit:>10.2f}x")


if __name__ == "__main__":
    main()
