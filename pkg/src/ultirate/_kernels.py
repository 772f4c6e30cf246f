"""Fixed-point iteration kernels for the power rating.

Two interchangeable implementations: numba-jitted loops (default when numba
is installed) and a vectorized numpy fallback. Selection: the ``backend``
argument, else the ULTIRATE_BACKEND environment variable (auto|numba|numpy).
Both produce bit-identical results; benchmarks/bench_usau_kernels.py compares
their speed.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

BACKEND_ENV = "ULTIRATE_BACKEND"


def resolve_backend(backend: str | None = None) -> str:
    choice = backend or os.environ.get(BACKEND_ENV, "auto")
    if choice == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if choice == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("backend 'numba' requested but numba is not installed")
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise ValueError(f"unknown backend {choice!r} (expected auto, numba, or numpy)")


def _iterate_loops(
    winner, loser, diff, weight, blowout, n_teams,
    initial_rating, gap_limit, min_other, tol, max_iters,
):
    m = winner.shape[0]
    ratings = np.full(n_teams, initial_rating)
    new_ratings = np.empty(n_teams, np.float64)
    num = np.zeros(n_teams, np.float64)
    den = np.zeros(n_teams, np.float64)

    games_per_team = np.zeros(n_teams, np.int64)
    for g in range(m):
        games_per_team[winner[g]] += 1
        games_per_team[loser[g]] += 1

    prev_ignored = np.zeros(m, np.bool_)
    ignored = np.zeros(m, np.bool_)
    iterations = 0
    converged = False

    for _ in range(max_iters):
        iterations += 1

        # Re-derive the ignored set from the current ratings. Single ordered
        # pass: counts only ever decrease, so no later pass can add more.
        ignored = np.zeros(m, np.bool_)
        non_ignored = games_per_team.copy()
        for g in range(m):
            if blowout[g] and ratings[winner[g]] - ratings[loser[g]] > gap_limit:
                if non_ignored[winner[g]] - 1 >= min_other:
                    ignored[g] = True
                    non_ignored[winner[g]] -= 1
                    non_ignored[loser[g]] -= 1

        # Weighted mean of per-game targets. Each game anchors at the pair
        # midpoint: winner target = anchor + diff, loser target = anchor - diff.
        # Winner contributions accumulate before loser contributions so the
        # summation order matches the vectorized fallback exactly.
        for t in range(n_teams):
            num[t] = 0.0
            den[t] = 0.0
        for g in range(m):
            if not ignored[g]:
                anchor = 0.5 * (ratings[winner[g]] + ratings[loser[g]])
                num[winner[g]] += weight[g] * (anchor + diff[g])
                den[winner[g]] += weight[g]
        for g in range(m):
            if not ignored[g]:
                anchor = 0.5 * (ratings[winner[g]] + ratings[loser[g]])
                num[loser[g]] += weight[g] * (anchor - diff[g])
                den[loser[g]] += weight[g]

        max_change = 0.0
        for t in range(n_teams):
            if den[t] > 0.0:
                new_ratings[t] = num[t] / den[t]
            else:
                new_ratings[t] = ratings[t]
            change = abs(new_ratings[t] - ratings[t])
            if change > max_change:
                max_change = change

        same_ignored = True
        for g in range(m):
            if ignored[g] != prev_ignored[g]:
                same_ignored = False
                break

        ratings[:] = new_ratings
        prev_ignored = ignored
        if max_change < tol and same_ignored:
            converged = True
            break

    counted = games_per_team.copy()
    for g in range(m):
        if ignored[g]:
            counted[winner[g]] -= 1
            counted[loser[g]] -= 1

    return ratings, ignored, counted, iterations, converged


if HAS_NUMBA:
    _iterate_numba = njit(cache=True)(_iterate_loops)


def _iterate_numpy(
    winner, loser, diff, weight, blowout, n_teams,
    initial_rating, gap_limit, min_other, tol, max_iters,
):
    m = winner.shape[0]
    ratings = np.full(n_teams, initial_rating)
    games_per_team = (
        np.bincount(winner, minlength=n_teams) + np.bincount(loser, minlength=n_teams)
    )

    prev_ignored = np.zeros(m, np.bool_)
    ignored = np.zeros(m, np.bool_)
    iterations = 0
    converged = False

    for _ in range(max_iters):
        iterations += 1

        ignored = np.zeros(m, np.bool_)
        candidate = blowout & (ratings[winner] - ratings[loser] > gap_limit)
        if candidate.any():
            non_ignored = games_per_team.copy()
            for g in np.flatnonzero(candidate):
                if non_ignored[winner[g]] - 1 >= min_other:
                    ignored[g] = True
                    non_ignored[winner[g]] -= 1
                    non_ignored[loser[g]] -= 1

        kept_weight = np.where(ignored, 0.0, weight)
        anchor = 0.5 * (ratings[winner] + ratings[loser])
        num = np.zeros(n_teams)
        den = np.zeros(n_teams)
        np.add.at(num, winner, kept_weight * (anchor + diff))
        np.add.at(den, winner, kept_weight)
        np.add.at(num, loser, kept_weight * (anchor - diff))
        np.add.at(den, loser, kept_weight)

        new_ratings = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), ratings)
        max_change = float(np.max(np.abs(new_ratings - ratings)))
        same_ignored = bool(np.array_equal(ignored, prev_ignored))

        ratings = new_ratings
        prev_ignored = ignored
        if max_change < tol and same_ignored:
            converged = True
            break

    counted = games_per_team.copy()
    counted -= np.bincount(winner[ignored], minlength=n_teams)
    counted -= np.bincount(loser[ignored], minlength=n_teams)

    return ratings, ignored, counted, iterations, converged


def run_iteration(
    winner: np.ndarray,
    loser: np.ndarray,
    diff: np.ndarray,
    weight: np.ndarray,
    blowout: np.ndarray,
    n_teams: int,
    initial_rating: float,
    gap_limit: float,
    min_other: int,
    tol: float,
    max_iters: int,
    backend: str | None = None,
):
    """Run the rating iteration; returns (ratings, ignored, counted, iters, converged)."""
    impl = _iterate_numba if resolve_backend(backend) == "numba" else _iterate_numpy
    return impl(
        np.ascontiguousarray(winner, np.int64),
        np.ascontiguousarray(loser, np.int64),
        np.ascontiguousarray(diff, np.float64),
        np.ascontiguousarray(weight, np.float64),
        np.ascontiguousarray(blowout, np.bool_),
        n_teams,
        float(initial_rating),
        float(gap_limit),
        int(min_other),
        float(tol),
        int(max_iters),
    )
