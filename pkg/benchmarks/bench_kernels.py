#!/usr/bin/env python3
"""Benchmark the compiled amplitude kernels against the NumPy fallback.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from starnoma import kernels, montecarlo
from starnoma.channel import SystemConfig
from starnoma.kernels import fallback
from starnoma.montecarlo import McSettings


def _time(fn, repeats=30):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(n=262_144, k_elements=5):
    rng = np.random.default_rng(0)
    z = rng.standard_normal((4, n))
    los, scale = 0.795, 0.0617
    out = np.zeros(n)

    rows = []
    for name, mod in (("compiled", kernels), ("numpy", fallback)):
        if name == "compiled" and kernels.BACKEND != "compiled":
            continue
        t_r = _time(lambda: mod.rician_amp(z[0], z[1], los, scale))
        t_c = _time(lambda: mod.cascade_accum(z[0], z[1], z[2], z[3],
                                              los, scale * scale, out))
        rows.append((name, t_r, t_c))
    return n, rows


def bench_point(trials=1_000_000):
    cfg = SystemConfig()
    mc = McSettings(trials=trials, seed=0)
    montecarlo.clear_cache()
    t0 = time.perf_counter()
    montecarlo.point_tallies(cfg, [100.0], mc, workers=1)
    return time.perf_counter() - t0


def main():
    print(f"active backend: {kernels.BACKEND}")
    n, rows = bench_kernels()
    print(f"\nkernel timings, n = {n} (best of 30):")
    print(f"{'path':>10} {'rician_amp':>12} {'cascade_accum':>14}")
    for name, t_r, t_c in rows:
        print(f"{name:>10} {t_r*1e3:>10.3f}ms {t_c*1e3:>12.3f}ms")
    if len(rows) == 2:
        print(f"{'speedup':>10} {rows[1][1]/rows[0][1]:>11.2f}x "
              f"{rows[1][2]/rows[0][2]:>13.2f}x")
    dt = bench_point()
    print(f"\nend to end: one 1e6-trial outage/rate point in {dt:.2f}s "
          f"({kernels.BACKEND} backend, single worker)")


if __name__ == "__main__":
    main()
