"""Compare the numba and pure-numpy Legendre-series kernels.

Usage: python benchmarks/bench_kernels.py [--points N] [--degree L] [--repeat R]

Reports the best wall time of each backend for the float64 and double-double
kernels and checks that both backends return identical bits.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mexneedlet import _accel
from mexneedlet._kernels import legendre_recurrence, series_dd, series_f64


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20_000)
    ap.add_argument("--degree", type=int, default=600)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    t = np.sort(rng.uniform(-1.0, 1.0, args.points))
    c = np.exp(-np.linspace(0.0, 40.0, args.degree))
    (a_hi, a_lo), (g_hi, g_lo) = legendre_recurrence(args.degree)
    zeros = np.zeros_like(t)
    ones = np.ones_like(t)
    cz = np.zeros_like(c)

    kernels = {
        "float64": lambda nb: series_f64(c, a_hi, g_hi, t, ones, t, use_numba=nb),
        "double-double": lambda nb: series_dd(
            (c, cz), (a_hi, a_lo), (g_hi, g_lo), (t, zeros), (ones, zeros), (t, zeros), use_numba=nb
        )[0],
    }
    print(f"points={args.points} degree={args.degree} threads={_accel.thread_cap() or 'default'}")
    print(f"{'kernel':<14} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8} identical")
    _accel.apply_thread_cap()
    for name, fn in kernels.items():
        t_np, r_np = best_of(lambda: fn(False), args.repeat)
        if _accel.HAVE_NUMBA:
            fn(True)  # compile outside the timing
            t_nb, r_nb = best_of(lambda: fn(True), args.repeat)
            same = bool(np.array_equal(r_np, r_nb))
            print(f"{name:<14} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f} {same}")
        else:
            print(f"{name:<14} {t_np:>10.4f} {'n/a':>10} {'n/a':>8} n/a")


if __name__ == "__main__":
    main()
