"""CSV reading, writing, and byte-stability."""

import pytest

from ultirate.domain import Division, Method, RatingTable
from ultirate.ingest import (
    IngestError,
    read_games,
    read_games_many,
    read_metrics,
    read_ratings,
    write_games,
    write_metrics,
    write_predictions,
    write_ratings,
)
from ultirate.leastsq import compute_leastsq
from ultirate.metrics import MetricReport
from ultirate.predict import build_predictions

from helpers import game, slice_of

HEADER = "season,division,stage,date,tournament,team_a,team_b,score_a,score_b"

ROWS = [
    "2019,mens,regular,2019-06-01,Invite,Sockeye,PoNY,15,10",
    "2019,mens,regular,2019-06-02,Invite,Truck Stop,Machine,13,11",
    "2019,mens,regular,2019-06-08,Open,PoNY,Machine,15,7",
]


def write_text(path, text):
    path.write_bytes(text.encode("utf-8"))
    return path


class TestReadGames:
    def test_well_formed_file(self, tmp_path):
        f = write_text(tmp_path / "g.csv", HEADER + "\n" + "\n".join(ROWS) + "\n")
        games, rejections = read_games(f)
        assert len(games) == 3
        assert rejections == []
        assert games[0].winner == "Sockeye"
        assert games[1].winner == "Truck Stop"

    def test_tie_row_rejected_with_row_number(self, tmp_path):
        rows = ROWS[:1] + ["2019,mens,regular,2019-06-03,Invite,A,B,9,9"]
        f = write_text(tmp_path / "g.csv", HEADER + "\n" + "\n".join(rows) + "\n")
        games, rejections = read_games(f)
        assert len(games) == 1
        assert len(rejections) == 1
        assert rejections[0].reason == "tie"
        assert rejections[0].row == 2

    def test_crlf_matches_lf(self, tmp_path):
        lf = write_text(tmp_path / "lf.csv", HEADER + "\n" + "\n".join(ROWS) + "\n")
        crlf = write_text(tmp_path / "crlf.csv", HEADER + "\r\n" + "\r\n".join(ROWS) + "\r\n")
        assert read_games(lf)[0] == read_games(crlf)[0]

    def test_quoted_team_names(self, tmp_path):
        row = '2019,mens,regular,2019-06-01,Invite,"Doe, John and Co",B,15,10'
        f = write_text(tmp_path / "g.csv", HEADER + "\n" + row + "\n")
        games, _ = read_games(f)
        assert games[0].winner == "Doe, John and Co"

    def test_missing_file_fatal(self, tmp_path):
        with pytest.raises(IngestError):
            read_games(tmp_path / "nope.csv")

    def test_malformed_header_fatal(self, tmp_path):
        f = write_text(tmp_path / "g.csv", "a,b,c\n1,2,3\n")
        with pytest.raises(IngestError):
            read_games(f)

    def test_short_row_rejected_not_fatal(self, tmp_path):
        f = write_text(tmp_path / "g.csv", HEADER + "\n2019,mens,regular\n" + ROWS[0] + "\n")
        games, rejections = read_games(f)
        assert len(games) == 1
        assert rejections[0].reason == "missing field"

    def test_reingest_identical(self, tmp_path):
        f = write_text(tmp_path / "g.csv", HEADER + "\n" + "\n".join(ROWS) + "\n")
        assert read_games(f) == read_games(f)

    def test_many_preserves_order(self, tmp_path):
        f1 = write_text(tmp_path / "a.csv", HEADER + "\n" + ROWS[0] + "\n")
        f2 = write_text(tmp_path / "b.csv", HEADER + "\n" + ROWS[2] + "\n")
        games, _ = read_games_many([f1, f2])
        assert [g.winner for g in games] == ["Sockeye", "PoNY"]


class TestGamesRoundTrip:
    def test_write_then_read(self, tmp_path):
        games = [game("A", "B", 15, 10), game("C D", "E", 13, 7, day=9)]
        f = tmp_path / "out.csv"
        write_games(games, f)
        back, rejections = read_games(f)
        assert rejections == []
        assert back == games


class TestWriteRatings:
    def make_table(self, ratings, ranked=None):
        return RatingTable(
            method=Method.LEASTSQ,
            season=2019,
            division=Division.MENS,
            ratings=ratings,
            ranked=ranked or {t: True for t in ratings},
        )

    def test_sorted_by_rating_descending(self, tmp_path):
        f = tmp_path / "r.csv"
        write_ratings(self.make_table({"B": 1.0, "C": -7.0, "A": 6.0}), f)
        rows = read_ratings(f)
        assert [(r[0], r[1]) for r in rows] == [(1, "A"), (2, "B"), (3, "C")]

    def test_empty_table_header_only(self, tmp_path):
        f = tmp_path / "r.csv"
        write_ratings(self.make_table({}), f)
        assert f.read_text() == "rank,team,rating,ranked\n"

    def test_equal_ratings_alphabetical(self, tmp_path):
        f = tmp_path / "r.csv"
        write_ratings(self.make_table({"Zeta": 2.0, "Alpha": 2.0}), f)
        rows = read_ratings(f)
        assert [r[1] for r in rows] == ["Alpha", "Zeta"]

    def test_round_trip_six_decimals(self, tmp_path):
        table = self.make_table({"A": 1.2345678, "B": -0.0000004}, ranked={"A": True, "B": False})
        f = tmp_path / "r.csv"
        write_ratings(table, f)
        rows = read_ratings(f)
        assert rows[0] == (1, "A", 1.234568, True)
        assert rows[1] == (2, "B", -0.0, False) or rows[1] == (2, "B", 0.0, False)

    def test_byte_identical_rewrites(self, tmp_path):
        table = self.make_table({"A": 6.0, "B": 1.0, "C": -7.0})
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_ratings(table, f1)
        write_ratings(table, f2)
        assert f1.read_bytes() == f2.read_bytes()


class TestWriteMetrics:
    def reports(self):
        out = []
        for season in (2018, 2019):
            for method in (Method.USAU, Method.LEASTSQ):
                out.append(
                    MetricReport(
                        season=season,
                        division=Division.MENS,
                        method=method,
                        games_predicted=100,
                        mad=2.25,
                        mse=8.5,
                        violation_rate=0.2,
                    )
                )
        return out

    def test_row_count_and_order(self, tmp_path):
        f = tmp_path / "m.csv"
        write_metrics(self.reports(), f)
        rows = read_metrics(f)
        assert len(rows) == 4
        keys = [(r.season, r.division.value, r.method.value) for r in rows]
        assert keys == sorted(keys)

    def test_empty_header_only(self, tmp_path):
        f = tmp_path / "m.csv"
        write_metrics([], f)
        assert f.read_text() == (
            "year,division,method,games_predicted,mad,mse,violation_rate\n"
        )

    def test_round_trip_at_six_decimals(self, tmp_path):
        f = tmp_path / "m.csv"
        originals = self.reports()
        write_metrics(originals, f)
        for back, orig in zip(read_metrics(f), sorted(
            originals, key=lambda r: (r.season, r.division.value, r.method.value)
        )):
            assert back.games_predicted == orig.games_predicted
            assert back.mad == pytest.approx(orig.mad, abs=5e-7)
            assert back.mse == pytest.approx(orig.mse, abs=5e-7)
            assert back.violation_rate == pytest.approx(orig.violation_rate, abs=5e-7)


class TestWritePredictions:
    def test_columns_and_ids(self, tmp_path):
        s = slice_of([game("A", "B", 15, 10), game("B", "C", 15, 7, day=3)])
        table = compute_leastsq(s)
        ps = build_predictions(table, s)
        f = tmp_path / "p.csv"
        write_predictions([ps], f)
        lines = f.read_text().splitlines()
        assert lines[0] == (
            "game_id,favorite,underdog,method,predicted_diff,actual_diff,higher_rated_won"
        )
        assert lines[1].startswith("2019-mens-00000,A,B,leastsq,")
        assert len(lines) == 3
