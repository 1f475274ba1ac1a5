"""Benchmark the compiled RK4 pair kernel against the pure-Python fallback.

Both backends propagate the same chirped Gaussian scenario; before timing,
their outputs are checked for bitwise equality so the speedup is never
bought with a numerical difference. Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from nads._kernels import rk4_pair_compiled
from nads.field_model import Chirp, FieldModel, GaussianEnvelope, SystemParams
from nads.tdse import propagate_fixed


def workload(points: int):
    params = SystemParams(omega_g=0.0, omega_e=5.0, gamma_g=0.05, gamma_e=0.15)
    field = FieldModel(
        carrier_omega=4.5,
        envelope=GaussianEnvelope(omega0=2.0, t_center=0.0, tau=20.0),
        phase=Chirp(phi0=0.0, beta=0.01, t_center=0.0),
    )
    grid = np.linspace(-60.0, 60.0, points)
    return params, field, grid


def best_time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Time the RK4 propagation kernels on a chirped damped "
        "Gaussian scenario."
    )
    parser.add_argument("--points", type=int, default=2001,
                        help="output grid points (default 2001)")
    parser.add_argument("--n-sub", type=int, nargs="+", default=[4, 16, 64],
                        help="substeps per output interval (default 4 16 64)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats, best-of (default 5)")
    args = parser.parse_args()

    params, field, grid = workload(args.points)
    if rk4_pair_compiled is None:
        print("compiled kernel unavailable; timing the python kernel only")

    print(f"{'n_sub':>6} {'stage points':>13} {'python':>12} "
          f"{'compiled':>12} {'speedup':>8}")
    for n_sub in args.n_sub:
        stages = 2 * (args.points - 1) * n_sub + 1

        def run(backend: str):
            return propagate_fixed(
                params, field, grid, frame="rotating",
                n_sub=n_sub, backend=backend,
            )

        t_py = best_time(lambda: run("python"), args.repeats)
        if rk4_pair_compiled is None:
            print(f"{n_sub:>6} {stages:>13} {t_py * 1e3:>10.2f} ms "
                  f"{'-':>12} {'-':>8}")
            continue
        t_cy = best_time(lambda: run("compiled"), args.repeats)
        a, b = run("python"), run("compiled")
        if not (np.array_equal(a.c_g, b.c_g) and np.array_equal(a.c_e, b.c_e)):
            raise SystemExit("backend outputs differ; refusing to report timings")
        print(f"{n_sub:>6} {stages:>13} {t_py * 1e3:>10.2f} ms "
              f"{t_cy * 1e3:>9.2f} ms {t_py / t_cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
