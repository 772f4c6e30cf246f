"""Least-squares ratings on the schedule graph.

Each game contributes one equation: winner rating minus loser rating equals
the game's score differential, normalized to a common 15-goal cap. The
solver returns the minimum-norm minimizer of the squared residual, which
sums to zero on every connected component of the schedule graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Division, Method, RatingTable, SeasonSlice, Stage

REFERENCE_CAP = 15


@dataclass(frozen=True)
class LsParams:
    reference_cap: int = REFERENCE_CAP

    def __post_init__(self):
        if self.reference_cap < 2:
            raise ValueError("reference_cap must be >= 2")


def normalize_diff(w: int, l: int, params: LsParams | None = None) -> float:
    """Score differential rescaled so the winning score becomes the cap.

    Both scores are scaled by reference_cap / w, so a 12-8 game counts the
    same as a 15-10 game: (w - l) * reference_cap / w.
    """
    params = params or LsParams()
    if not 0 <= l < w:
        raise ValueError(f"scores must satisfy 0 <= losing < winning, got {w}-{l}")
    if w < 2:
        raise ValueError(f"winning score must be >= 2, got {w}")
    return (w - l) * params.reference_cap / w


@dataclass(frozen=True)
class ScheduleSystem:
    """Winner-oriented game equations over an indexed team set.

    components partitions the column indices into connected components of
    the undirected schedule multigraph.
    """

    season: int
    division: Division
    team_index: dict[str, int]
    winner_col: np.ndarray
    loser_col: np.ndarray
    diffs: np.ndarray
    components: tuple[tuple[int, ...], ...]

    @property
    def n_teams(self) -> int:
        return len(self.team_index)

    @property
    def n_games(self) -> int:
        return int(self.winner_col.shape[0])


def _connected_components(n: int, edges_a: np.ndarray, edges_b: np.ndarray):
    """Union-find over the schedule edges; components ordered by smallest member."""
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in zip(edges_a, edges_b):
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(groups[root]) for root in sorted(groups))


def build_system(
    season_slice: SeasonSlice, params: LsParams | None = None
) -> ScheduleSystem:
    """One equation per game; columns indexed by first appearance in game order."""
    params = params or LsParams()
    if season_slice.stage is not Stage.REGULAR:
        raise ValueError("ratings are computed from regular-season games only")
    if not season_slice.games:
        raise ValueError("cannot build a system from an empty slice")

    team_index: dict[str, int] = {}
    for g in season_slice.games:
        team_index.setdefault(g.winner, len(team_index))
        team_index.setdefault(g.loser, len(team_index))

    m = season_slice.n_games
    winner_col = np.empty(m, np.int64)
    loser_col = np.empty(m, np.int64)
    diffs = np.empty(m, np.float64)
    for i, g in enumerate(season_slice.games):
        winner_col[i] = team_index[g.winner]
        loser_col[i] = team_index[g.loser]
        diffs[i] = normalize_diff(g.winning_score, g.losing_score, params)

    return ScheduleSystem(
        season=season_slice.season,
        division=season_slice.division,
        team_index=team_index,
        winner_col=winner_col,
        loser_col=loser_col,
        diffs=diffs,
        components=_connected_components(len(team_index), winner_col, loser_col),
    )


def solve_ratings(system: ScheduleSystem) -> RatingTable:
    """Minimum-norm least-squares ratings for the schedule system.

    Minimizes the squared residual of all game equations; among the shift
    family of minimizers, returns the one whose ratings sum to zero on each
    connected component. The normal-equation residual is verified to be at
    most 1e-9 relative to the right-hand side. All teams are ranked: the
    least-squares method imposes no game minimum.
    """
    if system.n_games == 0:
        raise ValueError("cannot solve an empty system")

    m, n = system.n_games, system.n_teams
    a = np.zeros((m, n))
    a[np.arange(m), system.winner_col] = 1.0
    a[np.arange(m), system.loser_col] = -1.0
    b = system.diffs

    ratings, *_ = np.linalg.lstsq(a, b, rcond=None)
    for comp in system.components:
        idx = list(comp)
        ratings[idx] -= ratings[idx].mean()

    atb = a.T @ b
    residual = np.linalg.norm(a.T @ (a @ ratings) - atb)
    if residual > 1e-9 * np.linalg.norm(atb) + 1e-12:
        raise ArithmeticError(
            f"normal-equation residual {residual:.3e} exceeds tolerance"
        )

    return RatingTable(
        method=Method.LEASTSQ,
        season=system.season,
        division=system.division,
        ratings={team: float(ratings[i]) for team, i in system.team_index.items()},
        ranked={team: True for team in system.team_index},
        n_components=len(system.components),
    )


def compute_leastsq(
    season_slice: SeasonSlice, params: LsParams | None = None
) -> RatingTable:
    """Convenience wrapper: build the system from a slice and solve it."""
    return solve_ratings(build_system(season_slice, params))
