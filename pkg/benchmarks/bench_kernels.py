#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the cumulative Simpson kernels and a full operator application at
several grid sizes and prints the speedup. Run:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from plapbox import _kernels_numba, _kernels_numpy
from plapbox.grids import RadialGrid
from plapbox.weights import RadialWeight

SIZES = (2_049, 32_769, 262_145)
REPEAT = 200


def best_of(fn, *args, repeat=REPEAT):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels():
    print(f"{'kernel':<16}{'n':>9}{'numpy [us]':>14}{'numba [us]':>14}{'speedup':>10}")
    for n in SIZES:
        y = np.sin(np.linspace(0.0, 3.0, n)) ** 2 + 0.5
        h = 1.0 / (n - 1)
        # warm the JIT before timing
        _kernels_numba.prefix_simpson(y, h)
        _kernels_numba.suffix_simpson(y, h)
        for name in ("prefix_simpson", "suffix_simpson"):
            t_np = best_of(getattr(_kernels_numpy, name), y, h)
            t_nb = best_of(getattr(_kernels_numba, name), y, h)
            print(
                f"{name:<16}{n:>9}{t_np * 1e6:>14.2f}{t_nb * 1e6:>14.2f}"
                f"{t_np / t_nb:>10.2f}x"
            )


def bench_operator():
    # one operator application = f-eval + prefix + power + suffix
    from plapbox.hypotheses import lambda_family
    from plapbox.solver import apply_T
    from plapbox.constants import torsion_profile

    print(f"\n{'apply_T':<16}{'n':>9}{'time [ms]':>14}   (current backend)")
    f = lambda_family(1.0, 1.5, 2.0)
    for n in SIZES:
        grid = RadialGrid(1.0, n)
        w = RadialWeight.from_constant(1.0, grid)
        u = torsion_profile(w, 2.0, 3)
        apply_T(u, f, w, 2.0, 3)
        t = best_of(apply_T, u, f, w, 2.0, 3, repeat=50)
        print(f"{'':<16}{n:>9}{t * 1e3:>14.3f}")


if __name__ == "__main__":
    from plapbox import BACKEND

    print(f"selected backend: {BACKEND}\n")
    bench_kernels()
    bench_operator()
