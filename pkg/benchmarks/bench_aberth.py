"""Benchmark the compiled sweep kernel against the NumPy fallback.

Run as: python benchmarks/bench_aberth.py [--sizes 50,100,200,400,800]
Both kernels solve the same spectra from the same initial iterates; the
table reports per-solve wall time and the max deviation between the two
results (which must sit at rounding level, since the update rules are
identical).
"""
import argparse
import time

import numpy as np

from cuecrit import _aberth_py
from cuecrit.haar import derived_seed, sample_eigenphases

try:
    from cuecrit import _aberth_cy
except ImportError:
    _aberth_cy = None


def initial_guesses(roots, n):
    return 0.5 * (roots[:-1] + roots[1:]) * (1.0 - 1.0 / (4.0 * n))


def time_kernel(kernel, cases, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        results = [kernel.aberth_iterate(w, z0, 1e-13, 200) for w, z0 in cases]
        best = min(best, (time.perf_counter() - t0) / len(cases))
    return best, results


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="50,100,200,400")
    parser.add_argument("--matrices", type=int, default=5)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _aberth_cy is None:
        print("compiled kernel not built; benchmarking fallback only")

    print(f"{'n':>5} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8} "
          f"{'max |dz|':>10} {'sweeps':>7}")
    for n in [int(s) for s in args.sizes.split(",")]:
        cases = []
        for i in range(args.matrices):
            spectrum = sample_eigenphases(n, derived_seed(7, i))
            roots = spectrum.roots()
            cases.append((roots, initial_guesses(roots, n)))
        t_py, res_py = time_kernel(_aberth_py, cases, args.repeats)
        if _aberth_cy is None:
            print(f"{n:>5} {t_py * 1e3:>12.2f} {'-':>12} {'-':>8} {'-':>10}")
            continue
        t_cy, res_cy = time_kernel(_aberth_cy, cases, args.repeats)
        dev = max(float(np.abs(a[0] - b[0]).max())
                  for a, b in zip(res_py, res_cy))
        sweeps = max(a[1] for a in res_py)
        print(f"{n:>5} {t_py * 1e3:>12.2f} {t_cy * 1e3:>12.2f} "
              f"{t_py / t_cy:>8.2f} {dev:>10.1e} {sweeps:>7}")


if __name__ == "__main__":
    main()
