"""Score-differential predictions from a rating table.

For the power rating, the per-game differential formula is solved for the
losing score given the winning score, turning a rating gap back into a
predicted margin. For least squares, the rating difference is rescaled from
the common 15-goal cap to the game's actual cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import Division, Method, RatingTable, SeasonSlice
from .leastsq import LsParams
from .usau import BASE_DIFF, DIFF_SPAN, MAX_DIFF, SINE_PHASE

_SIN_PHASE = math.sin(SINE_PHASE)


@dataclass(frozen=True)
class PredictionEntry:
    """Predicted vs. actual margin for one game, seen from the favorite.

    predicted_diff is the non-negative margin predicted for the higher-rated
    team; actual_diff is the game's true (positive) margin; higher_rated_won
    records whether the favorite actually won. Ties in rating are broken
    toward the actual winner, which leaves the error magnitude unchanged.
    """

    game_id: int
    favorite: str
    underdog: str
    predicted_diff: float
    actual_diff: int
    higher_rated_won: bool


@dataclass(frozen=True)
class PredictionSet:
    method: Method
    season: int
    division: Division
    entries: tuple[PredictionEntry, ...]
    n_skipped: int = 0


def invert_usau_diff(rating_gap: float, w: int) -> float:
    """Predicted margin for a rating gap, inverting the per-game differential.

    For gaps in [125, 600] this is the exact inverse of game_diff at winning
    score w: w - (w-1)*(1 - arcsin((gap-125)*sin(0.4pi)/475)/(0.8pi)). Gaps
    below 125 ramp linearly from 0 to the one-point margin; gaps above 600
    return the smallest margin that saturates the differential, w - (w-1)/2.
    Continuous and non-decreasing on [0, inf); margins are real-valued.
    """
    if rating_gap < 0:
        raise ValueError(f"rating gap must be >= 0, got {rating_gap}")
    if w < 2:
        raise ValueError(f"winning score must be >= 2, got {w}")
    if rating_gap < BASE_DIFF:
        return rating_gap / BASE_DIFF
    if rating_gap > MAX_DIFF:
        return w - (w - 1) / 2.0
    losing = (w - 1) * (
        1.0 - math.asin((rating_gap - BASE_DIFF) * _SIN_PHASE / DIFF_SPAN)
        / (2.0 * SINE_PHASE)
    )
    return w - losing


def predict_ls_diff(
    rating_i: float, rating_j: float, w: int, params: LsParams | None = None
) -> float:
    """Rating difference scaled back from the reference cap to the game's cap."""
    params = params or LsParams()
    if w < 2:
        raise ValueError(f"winning score must be >= 2, got {w}")
    return abs(rating_i - rating_j) * w / params.reference_cap


def build_predictions(
    table: RatingTable,
    season_slice: SeasonSlice,
    params: LsParams | None = None,
) -> PredictionSet:
    """One entry per slice game whose teams both appear in the table.

    Games with an unrated team are skipped and counted in n_skipped. The
    prediction uses the game's actual winning score, so the evaluation is
    retrodictive.
    """
    if (table.season, table.division) != (season_slice.season, season_slice.division):
        raise ValueError("table and slice must share season and division")

    entries = []
    skipped = 0
    for i, g in enumerate(season_slice.games):
        rw = table.ratings.get(g.winner)
        rl = table.ratings.get(g.loser)
        if rw is None or rl is None:
            skipped += 1
            continue
        higher_rated_won = rw >= rl
        favorite, underdog = (g.winner, g.loser) if higher_rated_won else (g.loser, g.winner)
        gap = abs(rw - rl)
        if table.method is Method.USAU:
            predicted = invert_usau_diff(gap, g.winning_score)
        else:
            predicted = predict_ls_diff(rw, rl, g.winning_score, params)
        entries.append(
            PredictionEntry(
                game_id=i,
                favorite=favorite,
                underdog=underdog,
                predicted_diff=predicted,
                actual_diff=g.winning_score - g.losing_score,
                higher_rated_won=higher_rated_won,
            )
        )

    return PredictionSet(
        method=table.method,
        season=season_slice.season,
        division=season_slice.division,
        entries=tuple(entries),
        n_skipped=skipped,
    )
