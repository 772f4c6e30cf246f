"""Shared builders for test fixtures."""

from __future__ import annotations

from datetime import date, timedelta

from ultirate.domain import Division, Game, SeasonSlice, Stage, build_slice


def game(
    winner: str,
    loser: str,
    w: int,
    l: int,
    season: int = 2019,
    division: Division = Division.MENS,
    stage: Stage = Stage.REGULAR,
    day: int = 0,
    tournament: str = "Invite",
) -> Game:
    return Game(
        season=season,
        division=division,
        stage=stage,
        date=date(season, 6, 1) + timedelta(days=day),
        tournament=tournament,
        winner=winner,
        loser=loser,
        winning_score=w,
        losing_score=l,
    )


def slice_of(games: list[Game]) -> SeasonSlice:
    first = games[0]
    return build_slice(first.season, first.division, first.stage, games)


def record(
    team_a: str = "A",
    team_b: str = "B",
    score_a: str = "15",
    score_b: str = "10",
    season: str = "2019",
    division: str = "mens",
    stage: str = "regular",
    date_str: str = "2019-06-01",
    tournament: str = "Invite",
) -> dict[str, str]:
    return {
        "season": season,
        "division": division,
        "stage": stage,
        "date": date_str,
        "tournament": tournament,
        "team_a": team_a,
        "team_b": team_b,
        "score_a": score_a,
        "score_b": score_b,
    }
