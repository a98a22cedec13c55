#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure-Python fallback.

Usage:
    python3 benchmarks/benchmark_kernels.py [--repeats N]

Times the two hot loops (OU recurrence, fixed-step RK4 for each model) on
workloads matching the acceptance suite, checks that both backends return
bit-identical arrays, and prints one row per kernel.
"""

import argparse
import math
import time

import numpy as np

from oupop._kernels import _pure

try:
    from oupop._kernels import _core
except ImportError:
    _core = None


def _time(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def _ou_workload(n=1_000_000, beta=1.0, gamma=0.1, dt=0.01, seed=7):
    rng = np.random.default_rng(seed)
    dts = np.full(n, dt)
    phi = np.exp(-beta * dts)
    scale = gamma * np.sqrt((1.0 - np.exp(-2.0 * beta * dts)) / (2.0 * beta))
    xi = rng.standard_normal(n)
    z0 = gamma / math.sqrt(2 * beta) * float(rng.standard_normal())
    return (z0, phi, scale, xi)


def _noise(horizon, seed=3, step=0.01):
    rng = np.random.default_rng(seed)
    nt = step * np.arange(int(round(horizon / step)) + 1)
    nv = 0.07 * rng.standard_normal(nt.size)
    return nt, nv


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _core is None:
        print("compiled core not built; run `python3 setup.py build_ext --inplace`")
        return 1

    ou_args = _ou_workload()
    nt10, nv10 = _noise(10.0)
    nt50, nv50 = _noise(50.0)
    n10, last10 = 10_000, 10.0 - 9999 * 1e-3
    n50, last50 = 50_000, 50.0 - 49_999 * 1e-3

    cases = [
        ("ou_recurrence (1e6 steps)",
         lambda be: be.ou_recurrence(*ou_args),
         lambda r: r),
        ("rk4_logistic_k (1e4 steps)",
         lambda be: be.rk4_logistic_k(3.0, 2.0, 2.4, 1e-3, last10, n10, nt10, nv10),
         lambda r: r[0]),
        ("rk4_logistic_r (1e4 steps)",
         lambda be: be.rk4_logistic_r(2.0, 1.5, 2.0, 0.2, 1e-3, last10, n10, nt10, nv10),
         lambda r: r[0]),
        ("rk4_lv (5e4 steps)",
         lambda be: be.rk4_lv(25.0, 22.0, 20.0, 4.0, 1.0, 30.0, 2.0, 3.2, 1.2,
                              1e-3, last50, n50, nt50, nv50, nt50, nv50),
         lambda r: np.column_stack((r[0], r[1]))),
    ]

    print(f"{'kernel':<28} {'pure':>10} {'core':>10} {'speedup':>8}  identical")
    for name, call, extract in cases:
        t_pure, r_pure = _time(lambda: call(_pure), args.repeats)
        t_core, r_core = _time(lambda: call(_core), args.repeats)
        same = np.array_equal(extract(r_pure), extract(r_core))
        print(f"{name:<28} {t_pure * 1e3:>8.1f}ms {t_core * 1e3:>8.1f}ms "
              f"{t_pure / t_core:>7.1f}x  {same}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
