"""Time the compiled and pure-Python RK4 kernels on the same problems.

    python3 benchmarks/bench_rk4.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from realode import kernels
from realode.oracle import DEFAULT_H, DEFAULT_SPAN

CASES = [(0.0, 1.0), (3.0, 2.0), (0.5, 4.0), (-1.0, -2.0)]


def run(backend, h):
    march = kernels.BACKENDS[backend]
    n = max(1, int(np.ceil(DEFAULT_SPAN / h * (1 - 1e-12))))
    for a, b in CASES:
        march(a, b, 1.0, 0.0, DEFAULT_SPAN, h, n)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--h", type=float, default=DEFAULT_H)
    args = ap.parse_args()

    steps = len(CASES) * DEFAULT_SPAN / args.h
    timings = {}
    for name in sorted(kernels.BACKENDS):
        best = min(timeit.repeat(lambda: run(name, args.h), number=1, repeat=args.repeat))
        timings[name] = best
        print(f"{name:>7}: {best * 1e3:9.2f} ms  ({steps / best / 1e6:7.2f} M steps/s)")
    if len(timings) == 2:
        print(f"speedup: {timings['python'] / timings['cython']:.1f}x")
    else:
        print("compiled kernel not built; only the fallback was timed")
    print(f"default backend: {kernels.BACKEND}")


if __name__ == "__main__":
    main()
