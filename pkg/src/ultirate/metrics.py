"""Retrodictive accuracy metrics: MAD, MSE, and ranking violations.

Errors are signed relative to the higher-rated team, so an upset penalizes
both the margin and the direction of the miss. Sums use math.fsum, making
results independent of accumulation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domain import Division, Method, RatingTable, SeasonSlice
from .predict import PredictionSet


@dataclass(frozen=True)
class MetricReport:
    season: int
    division: Division
    method: Method
    games_predicted: int
    mad: float
    mse: float
    violation_rate: float

    def __post_init__(self):
        if self.games_predicted < 0 or self.mad < 0 or self.mse < 0:
            raise ValueError("metric values must be non-negative")
        if not 0.0 <= self.violation_rate <= 1.0:
            raise ValueError(f"violation rate {self.violation_rate} outside [0, 1]")


@dataclass(frozen=True)
class ViolationSummary:
    """Ranking-violation count over a slice under one rating table.

    A violation is a game won by the strictly lower-rated team; exact rating
    ties never count and are reported separately. total excludes games with
    an unrated team. defined is False when no games were countable (rate 0).
    """

    violations: int
    ties: int
    total: int
    rate: float
    defined: bool = True


def _signed_errors(predictions: PredictionSet) -> list[float]:
    if not predictions.entries:
        raise ValueError("cannot compute metrics over an empty prediction set")
    errors = []
    for e in predictions.entries:
        actual = e.actual_diff if e.higher_rated_won else -e.actual_diff
        errors.append(actual - e.predicted_diff)
    return errors


def mad(predictions: PredictionSet) -> float:
    """Mean absolute deviation of predicted margins from signed outcomes."""
    errors = _signed_errors(predictions)
    return math.fsum(abs(e) for e in errors) / len(errors)


def mse(predictions: PredictionSet) -> float:
    """Mean squared error of predicted margins from signed outcomes."""
    errors = _signed_errors(predictions)
    return math.fsum(e * e for e in errors) / len(errors)


def violation_rate(table: RatingTable, season_slice: SeasonSlice) -> ViolationSummary:
    """Fraction of games won by the lower-rated team.

    Depends only on the rating order, never on magnitudes.
    """
    violations = ties = total = 0
    for g in season_slice.games:
        rw = table.ratings.get(g.winner)
        rl = table.ratings.get(g.loser)
        if rw is None or rl is None:
            continue
        total += 1
        if rl > rw:
            violations += 1
        elif rl == rw:
            ties += 1
    if total == 0:
        return ViolationSummary(0, 0, 0, 0.0, defined=False)
    return ViolationSummary(violations, ties, total, violations / total)


def build_report(
    table: RatingTable, season_slice: SeasonSlice, predictions: PredictionSet
) -> MetricReport:
    """Assemble the per-(season, division, method) metric row."""
    summary = violation_rate(table, season_slice)
    if summary.total != len(predictions.entries):
        raise ValueError(
            "violation count covers a different game set than the predictions"
        )
    return MetricReport(
        season=season_slice.season,
        division=season_slice.division,
        method=table.method,
        games_predicted=len(predictions.entries),
        mad=mad(predictions),
        mse=mse(predictions),
        violation_rate=summary.rate,
    )
