"""CSV ingestion and byte-stable output files.

Game schema (header required, exact): season, division, stage, date,
tournament, team_a, team_b, score_a, score_b. UTF-8, comma-delimited,
RFC-4180 quoting; LF and CRLF inputs read identically. Bad rows become
Rejection records rather than aborting; a missing file or wrong header is
fatal. All writers emit deterministic, byte-identical files for identical
inputs: fixed 6-decimal floats, explicit sort orders, LF newlines.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .domain import (
    GAME_FIELDS,
    Division,
    Game,
    GameValidationError,
    Method,
    RatingTable,
    validate_game,
)
from .metrics import MetricReport
from .predict import PredictionSet


class IngestError(Exception):
    """Fatal input problem: missing file, unreadable file, or bad header."""


@dataclass(frozen=True)
class Rejection:
    """One skipped row: 1-based data row number, reason code, and detail."""

    row: int
    reason: str
    detail: str = ""
    source: str = ""


def read_games(path: str | Path) -> tuple[list[Game], list[Rejection]]:
    """Read one game CSV; every row yields a Game or a Rejection, in order."""
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"no such file: {path}")
    games: list[Game] = []
    rejections: list[Rejection] = []
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file, expected header row") from None
        if tuple(h.strip() for h in header) != GAME_FIELDS:
            raise IngestError(
                f"{path}: bad header {header!r}, expected {','.join(GAME_FIELDS)}"
            )
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(GAME_FIELDS):
                rejections.append(
                    Rejection(row_no, "missing field", f"{len(row)} columns", str(path))
                )
                continue
            record = dict(zip(GAME_FIELDS, row))
            try:
                games.append(validate_game(record))
            except GameValidationError as err:
                rejections.append(Rejection(row_no, err.reason, err.detail, str(path)))
    return games, rejections


def read_games_many(paths: Iterable[str | Path]) -> tuple[list[Game], list[Rejection]]:
    """Read several game CSVs in the given order, concatenating results."""
    games: list[Game] = []
    rejections: list[Rejection] = []
    for path in paths:
        g, r = read_games(path)
        games.extend(g)
        rejections.extend(r)
    return games, rejections


def write_games(games: Sequence[Game], path: str | Path) -> None:
    """Write games in the ingest schema (winner as team_a), row per game."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(GAME_FIELDS)
        for g in games:
            writer.writerow([
                g.season,
                g.division.value,
                g.stage.value,
                g.date.isoformat(),
                g.tournament,
                g.winner,
                g.loser,
                g.winning_score,
                g.losing_score,
            ])


def _fmt(x: float) -> str:
    return f"{x + 0.0:.6f}"


RATING_COLUMNS = ("rank", "team", "rating", "ranked")


def write_ratings(table: RatingTable, path: str | Path) -> None:
    """Rating CSV: rank,team,rating,ranked; rating descending, name ascending."""
    rows = sorted(table.ratings.items(), key=lambda kv: (-kv[1], kv[0]))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RATING_COLUMNS)
        for rank, (team, rating) in enumerate(rows, start=1):
            writer.writerow([
                rank, team, _fmt(rating), str(table.ranked.get(team, True)).lower(),
            ])


def read_ratings(path: str | Path) -> list[tuple[int, str, float, bool]]:
    """Parse a rating CSV back into (rank, team, rating, ranked) tuples."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != RATING_COLUMNS:
            raise IngestError(f"{path}: bad rating header {header!r}")
        for row in reader:
            out.append((int(row[0]), row[1], float(row[2]), row[3] == "true"))
    return out


METRIC_COLUMNS = (
    "year", "division", "method", "games_predicted", "mad", "mse", "violation_rate",
)


def write_metrics(reports: Iterable[MetricReport], path: str | Path) -> None:
    """Metric CSV, one row per (year, division, method), sorted by that key."""
    ordered = sorted(
        reports, key=lambda r: (r.season, r.division.value, r.method.value)
    )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(METRIC_COLUMNS)
        for r in ordered:
            writer.writerow([
                r.season,
                r.division.value,
                r.method.value,
                r.games_predicted,
                _fmt(r.mad),
                _fmt(r.mse),
                _fmt(r.violation_rate),
            ])


def read_metrics(path: str | Path) -> list[MetricReport]:
    """Parse a metric CSV back into MetricReport values."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != METRIC_COLUMNS:
            raise IngestError(f"{path}: bad metric header {header!r}")
        for row in reader:
            out.append(
                MetricReport(
                    season=int(row[0]),
                    division=Division(row[1]),
                    method=Method(row[2]),
                    games_predicted=int(row[3]),
                    mad=float(row[4]),
                    mse=float(row[5]),
                    violation_rate=float(row[6]),
                )
            )
    return out


PREDICTION_COLUMNS = (
    "game_id", "favorite", "underdog", "method",
    "predicted_diff", "actual_diff", "higher_rated_won",
)


def write_predictions(
    prediction_sets: Iterable[PredictionSet], path: str | Path
) -> None:
    """Prediction CSV; sets in the given order, entries in slice game order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PREDICTION_COLUMNS)
        for ps in prediction_sets:
            prefix = f"{ps.season}-{ps.division.value}"
            for e in ps.entries:
                writer.writerow([
                    f"{prefix}-{e.game_id:05d}",
                    e.favorite,
                    e.underdog,
                    ps.method.value,
                    _fmt(e.predicted_diff),
                    e.actual_diff,
                    str(e.higher_rated_won).lower(),
                ])
