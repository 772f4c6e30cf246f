"""Iterative power rating: per-game differentials, weights, and the fixed point.

The rating differential a game awards grows concavely with margin, from 125
for any one-point game to a 600 cap hit exactly when the winning score more
than doubles the losing score. Team ratings are the weighted mean of per-game
targets, iterated to a fixed point from a uniform 1000 start; each game's
targets straddle the pair midpoint by the differential, which keeps the
iteration convergent and anchored on every schedule graph. Lopsided games
(favorite by more than 600 beating the spread w > 2l + 1) are dropped each
round, provided the winner keeps at least five other counted results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import run_iteration
from .domain import Method, RatingTable, SeasonSlice, Stage

INITIAL_RATING = 1000.0
BASE_DIFF = 125.0
DIFF_SPAN = 475.0
SINE_PHASE = 0.4 * math.pi
MAX_DIFF = 600.0
BLOWOUT_GAP = 600.0
MIN_OTHER_RESULTS = 5
MIN_GAMES_RANKED = 10
SCORE_WEIGHT_DENOMINATOR = 19

_SIN_PHASE = math.sin(SINE_PHASE)


@dataclass(frozen=True)
class UsauParams:
    """Constants and stopping knobs for the power rating."""

    initial_rating: float = INITIAL_RATING
    base_diff: float = BASE_DIFF
    span: float = DIFF_SPAN
    phase: float = SINE_PHASE
    max_diff: float = MAX_DIFF
    blowout_gap: float = BLOWOUT_GAP
    min_other_results: int = MIN_OTHER_RESULTS
    min_games_ranked: int = MIN_GAMES_RANKED
    score_weight_denominator: int = SCORE_WEIGHT_DENOMINATOR
    convergence_tol: float = 1e-6
    max_iterations: int = 10000

    def __post_init__(self):
        if self.base_diff + self.span != self.max_diff:
            raise ValueError("base_diff + span must equal max_diff")
        for name in (
            "initial_rating", "base_diff", "span", "phase", "max_diff",
            "blowout_gap", "min_other_results", "min_games_ranked",
            "score_weight_denominator", "convergence_tol", "max_iterations",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def _check_scores(w: int, l: int) -> None:
    if not 0 <= l < w:
        raise ValueError(f"scores must satisfy 0 <= losing < winning, got {w}-{l}")
    if w < 2:
        raise ValueError(f"winning score must be >= 2, got {w}")


def game_diff(w: int, l: int) -> float:
    """Rating differential earned by the winner of a w-l game, in [125, 600].

    125 + 475 * sin(min(1, 2*(1 - l/(w-1))) * 0.4pi) / sin(0.4pi): every
    one-point game is worth exactly 125, each extra goal is worth more in
    close games than in lopsided ones, and the 600 maximum is reached exactly
    when w > 2l.
    """
    _check_scores(w, l)
    frac = min(1.0, 2.0 * (1.0 - l / (w - 1)))
    return BASE_DIFF + DIFF_SPAN * math.sin(frac * SINE_PHASE) / _SIN_PHASE


def game_rating(opponent_rating: float, w: int, l: int, won: bool) -> float:
    """Single-game rating: the opponent's rating plus/minus the differential."""
    d = game_diff(w, l)
    return opponent_rating + d if won else opponent_rating - d


def date_weight(t: int, n: int) -> float:
    """Weight 2**((t/n) - 1) for a game in week t of an n-week season."""
    if not 1 <= t <= n:
        raise ValueError(f"week index {t} outside 1..{n}")
    return 2.0 ** (t / n - 1.0)


def score_weight(w: int, l: int) -> float:
    """Weight min(1, sqrt((w + max(l, floor((w-1)/2))) / 19)).

    Discounts games with unusually small goal caps; any game won with 13 or
    more goals carries full weight.
    """
    _check_scores(w, l)
    return min(1.0, math.sqrt((w + max(l, (w - 1) // 2)) / SCORE_WEIGHT_DENOMINATOR))


def blowout_ignorable(gap: float, w: int, l: int) -> bool:
    """True when a game qualifies for the blowout-ignore rule.

    The winner must be rated more than 600 points above the loser and win
    with w > 2l + 1 (strictly beyond the margin that saturates game_diff).
    """
    return gap > BLOWOUT_GAP and w > 2 * l + 1


def compute_usau(
    season_slice: SeasonSlice,
    params: UsauParams | None = None,
    backend: str | None = None,
) -> RatingTable:
    """Iterate the power rating on a regular-season slice to convergence.

    All teams start at 1000. Each round re-derives the blowout-ignored set
    from the current ratings (a game is dropped only while its winner keeps
    at least min_other_results other counted results), then recomputes every
    rating simultaneously from the previous round's values as the weighted
    mean of per-game targets, weight = date_weight * score_weight. Teams
    whose games are all ignored keep their previous rating. Convergence
    requires the maximum rating change to fall below convergence_tol with an
    unchanged ignored set; otherwise the table is returned with
    converged=False after max_iterations rounds.

    Teams with fewer than min_games_ranked counted games still receive
    ratings and still influence opponents, but are flagged ranked=False.
    """
    params = params or UsauParams()
    if season_slice.stage is not Stage.REGULAR:
        raise ValueError("power ratings are computed from regular-season games only")
    if not season_slice.games:
        raise ValueError("cannot rate an empty slice")

    team_index: dict[str, int] = {}
    for g in season_slice.games:
        team_index.setdefault(g.winner, len(team_index))
        team_index.setdefault(g.loser, len(team_index))

    m = season_slice.n_games
    winner = np.empty(m, np.int64)
    loser = np.empty(m, np.int64)
    diff = np.empty(m, np.float64)
    weight = np.empty(m, np.float64)
    blowout = np.empty(m, np.bool_)
    for i, g in enumerate(season_slice.games):
        winner[i] = team_index[g.winner]
        loser[i] = team_index[g.loser]
        diff[i] = game_diff(g.winning_score, g.losing_score)
        weight[i] = date_weight(
            season_slice.weeks[i], season_slice.week_count
        ) * score_weight(g.winning_score, g.losing_score)
        blowout[i] = g.winning_score > 2 * g.losing_score + 1

    ratings, ignored, counted, iterations, converged = run_iteration(
        winner, loser, diff, weight, blowout,
        n_teams=len(team_index),
        initial_rating=params.initial_rating,
        gap_limit=params.blowout_gap,
        min_other=params.min_other_results,
        tol=params.convergence_tol,
        max_iters=params.max_iterations,
        backend=backend,
    )

    return RatingTable(
        method=Method.USAU,
        season=season_slice.season,
        division=season_slice.division,
        ratings={team: float(ratings[i]) for team, i in team_index.items()},
        ranked={
            team: int(counted[i]) >= params.min_games_ranked
            for team, i in team_index.items()
        },
        ignored_games=frozenset(int(i) for i in np.flatnonzero(ignored)),
        iterations_used=int(iterations),
        converged=bool(converged),
    )
