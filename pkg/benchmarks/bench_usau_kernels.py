#!/usr/bin/env python3
"""Benchmark the power-rating iteration kernels: numba loops vs numpy fallback.

Builds one synthetic season per size, runs both backends on identical inputs,
checks they agree bit-for-bit, and reports the best wall time per solve. The
"capped" row deliberately uses noisy data whose blowout set never stabilizes,
so it times the full 10000-round iteration cap.

Usage: python benchmarks/bench_usau_kernels.py [--repeats 3]
"""

import argparse
import time

from ultirate.synth import SynthSpec, generate
from ultirate.usau import compute_usau

# name, teams, games, true-rating spread (goals), noise sd (goals)
SIZES = [
    ("small", 40, 400, 10.0, 1.5),
    ("medium", 150, 1600, 12.0, 1.5),
    ("large", 300, 4000, 12.0, 1.5),
    ("capped", 300, 4000, 12.0, 3.0),
]


def bench(backend: str, season, repeats: int):
    table = compute_usau(season, backend=backend)  # warm-up / jit compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        table = compute_usau(season, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, table


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"{'season':<8} {'teams':>6} {'games':>6} {'iters':>6} {'conv':>5} "
          f"{'numpy':>10} {'numba':>10} {'speedup':>8}")
    for name, n_teams, n_games, spread, noise in SIZES:
        truth = {f"T{i:03d}": spread * (0.5 - i / n_teams) for i in range(n_teams)}
        spec = SynthSpec(
            true_ratings=truth, schedule="random", n_games=n_games,
            noise_sd=noise, seed=42, n_weeks=13,
        )
        season = generate(spec)

        t_numpy, table_numpy = bench("numpy", season, args.repeats)
        t_numba, table_numba = bench("numba", season, args.repeats)
        if table_numpy.ratings != table_numba.ratings:
            print(f"{name}: BACKEND MISMATCH")
            return 1
        print(f"{name:<8} {n_teams:>6} {n_games:>6} {table_numba.iterations_used:>6} "
              f"{str(table_numba.converged):>5} {t_numpy * 1e3:>8.1f}ms "
              f"{t_numba * 1e3:>8.1f}ms {t_numpy / t_numba:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
