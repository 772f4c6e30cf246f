"""Synthetic season generator for property tests and recovery studies.

Games are drawn from known true ratings: the raw differential between two
teams is their rating gap plus gaussian noise, the winner always reaches the
goal cap, and the loser's score encodes the (clamped, rounded) differential.
Identical specs generate identical seasons.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .domain import Division, Game, RatingTable, SeasonSlice, Stage, build_slice

SCHEDULE_KINDS = ("round_robin", "pods", "random")


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic season.

    schedule: "round_robin" (every pair once), "pods" (round robin inside
    consecutive pods of pod_size teams, leaving the schedule graph
    disconnected), or "random" (n_games uniformly drawn pairings).
    """

    true_ratings: dict[str, float]
    schedule: str = "round_robin"
    pod_size: int = 4
    n_games: int = 0
    noise_sd: float = 0.0
    cap: int = 15
    seed: int = 0
    season: int = 2000
    division: Division = Division.MENS
    stage: Stage = Stage.REGULAR
    n_weeks: int = 8

    @property
    def n_teams(self) -> int:
        return len(self.true_ratings)

    def __post_init__(self):
        if self.n_teams < 2:
            raise ValueError("need at least two teams")
        if self.schedule not in SCHEDULE_KINDS:
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.schedule == "pods" and self.pod_size < 2:
            raise ValueError("pod_size must be >= 2")
        if self.schedule == "random" and self.n_games < 1:
            raise ValueError("random schedule needs n_games >= 1")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be >= 0")
        if self.cap < 2:
            raise ValueError("cap must be >= 2")
        if self.n_weeks < 1:
            raise ValueError("n_weeks must be >= 1")


def _pairings(spec: SynthSpec, rng: np.random.Generator) -> list[tuple[int, int]]:
    n = spec.n_teams
    if spec.schedule == "round_robin":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if spec.schedule == "pods":
        pairs = []
        for start in range(0, n, spec.pod_size):
            pod = range(start, min(start + spec.pod_size, n))
            pairs.extend((i, j) for i in pod for j in pod if i < j)
        return pairs
    pairs = []
    while len(pairs) < spec.n_games:
        i, j = rng.integers(0, n, size=2)
        if i != j:
            pairs.append((int(i), int(j)))
    return pairs


def generate(spec: SynthSpec) -> SeasonSlice:
    """Play out the scheduled pairings and return them as a season slice.

    For a pairing (i, j): raw differential = true_i - true_j + noise; the
    higher side wins (an exact zero is re-rolled), winning score = cap,
    losing score = cap - round(clamp(|differential|, 1, cap - 1)). Dates
    spread uniformly over the spec's week span.
    """
    rng = np.random.default_rng(spec.seed)
    teams = list(spec.true_ratings)
    pairs = _pairings(spec, rng)

    # First Monday of June: aligning to the week start makes the slice span
    # exactly n_weeks calendar weeks.
    june1 = date(spec.season, 6, 1)
    start = june1 + timedelta(days=(8 - june1.isoweekday()) % 7)
    span_days = 7 * spec.n_weeks - 1
    m = len(pairs)

    games = []
    for k, (i, j) in enumerate(pairs):
        delta = spec.true_ratings[teams[i]] - spec.true_ratings[teams[j]]
        if spec.noise_sd > 0:
            delta += rng.normal(0.0, spec.noise_sd)
            attempts = 0
            while delta == 0.0:
                delta = (
                    spec.true_ratings[teams[i]] - spec.true_ratings[teams[j]]
                    + rng.normal(0.0, spec.noise_sd)
                )
                attempts += 1
                if attempts > 100:
                    raise RuntimeError("could not break an exact tie")
        if delta == 0.0:
            raise ValueError(
                f"teams {teams[i]!r} and {teams[j]!r} have equal true ratings "
                "and noise_sd=0; no winner can be drawn"
            )
        winner, loser = (i, j) if delta > 0 else (j, i)
        margin = int(round(min(max(abs(delta), 1.0), spec.cap - 1.0)))
        offset = 0 if m == 1 else round(k * span_days / (m - 1))
        games.append(
            Game(
                season=spec.season,
                division=spec.division,
                stage=spec.stage,
                date=start + timedelta(days=offset),
                tournament="synth",
                winner=teams[winner],
                loser=teams[loser],
                winning_score=spec.cap,
                losing_score=spec.cap - margin,
            )
        )

    return build_slice(spec.season, spec.division, spec.stage, games)


def recovery_error(true_ratings: dict[str, float], estimated: RatingTable) -> float:
    """RMS gap between true and estimated ratings after centering both to zero.

    Both vectors are shifted to mean zero over the shared team set, removing
    the arbitrary additive constant before comparison.
    """
    if set(true_ratings) != set(estimated.ratings):
        raise ValueError("true and estimated ratings cover different team sets")
    teams = sorted(true_ratings)
    t = np.array([true_ratings[x] for x in teams])
    e = np.array([estimated.ratings[x] for x in teams])
    t = t - t.mean()
    e = e - e.mean()
    return float(np.sqrt(np.mean((e - t) ** 2)))
