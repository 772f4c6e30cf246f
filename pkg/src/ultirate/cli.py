"""Command-line entry point: rate, predict, evaluate, top, synth.

Every run is fully determined by its flags and input files; identical runs
produce byte-identical outputs. Exit codes: 0 ok, 2 bad configuration,
3 I/O failure, 4 empty filter result, 5 non-convergence under --strict.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import ingest
from .domain import Division, Method, RatingTable, SeasonSlice, Stage, partition_seasons
from .leastsq import LsParams, compute_leastsq
from .metrics import build_report
from .predict import build_predictions
from .synth import SynthSpec, generate
from .usau import UsauParams, compute_usau

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_EMPTY = 4
EXIT_NONCONVERGED = 5


class ConfigError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"ultirate: {msg}", file=sys.stderr)


def _input_files(raw: str) -> list[Path]:
    path = Path(raw)
    if path.is_dir():
        files = sorted(path.glob("*.csv"))
        if not files:
            raise ingest.IngestError(f"no .csv files in directory {path}")
        return files
    return [path]


def _load_slices(args) -> list[SeasonSlice]:
    games, rejections = ingest.read_games_many(_input_files(args.input))
    if rejections:
        _err(f"{len(rejections)} row(s) rejected")
        for r in rejections[:5]:
            _err(f"  {r.source} row {r.row}: {r.reason}" + (f" ({r.detail})" if r.detail else ""))
        if len(rejections) > 5:
            _err(f"  ... and {len(rejections) - 5} more")
    slices = partition_seasons(games)
    if args.season:
        slices = [s for s in slices if s.season in set(args.season)]
    if args.division:
        slices = [s for s in slices if s.division is Division(args.division)]
    slices = [s for s in slices if s.stage is Stage.REGULAR]
    return slices


def _check_stage(args) -> None:
    if args.stage != Stage.REGULAR.value:
        raise ConfigError(
            "ratings are defined on regular-season play; --stage post is not supported here"
        )


def _methods(args) -> list[Method]:
    if args.method == "both":
        return [Method.USAU, Method.LEASTSQ]
    return [Method(args.method)]


def _usau_params(args) -> UsauParams:
    return UsauParams(convergence_tol=args.tol, max_iterations=args.max_iters)


def _ls_params(args) -> LsParams:
    return LsParams(reference_cap=args.ref_cap)


def _rate_one(
    season_slice: SeasonSlice, method: Method, usau_params: UsauParams, ls_params: LsParams
) -> RatingTable:
    if method is Method.USAU:
        return compute_usau(season_slice, usau_params)
    return compute_leastsq(season_slice, ls_params)


def _warn_table(table: RatingTable) -> bool:
    """Report convergence/component caveats; returns True if unconverged."""
    unit = f"{table.season} {table.division.value} {table.method.value}"
    if not table.converged:
        _err(f"{unit}: did not converge within the iteration cap")
        return True
    if table.n_components > 1:
        _err(
            f"{unit}: schedule graph has {table.n_components} components; "
            "ratings are only comparable within a component"
        )
    return False


def cmd_rate(args) -> int:
    _check_stage(args)
    slices = _load_slices(args)
    if not slices:
        _err("no games match the given filters")
        return EXIT_EMPTY
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    usau_params, ls_params = _usau_params(args), _ls_params(args)
    any_unconverged = False
    for s in slices:
        for method in _methods(args):
            table = _rate_one(s, method, usau_params, ls_params)
            any_unconverged |= _warn_table(table)
            name = f"ratings_{s.season}_{s.division.value}_{method.value}.csv"
            ingest.write_ratings(table, outdir / name)
            print(outdir / name)
    if any_unconverged and args.strict:
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_predict(args) -> int:
    _check_stage(args)
    slices = _load_slices(args)
    if not slices:
        _err("no games match the given filters")
        return EXIT_EMPTY
    usau_params, ls_params = _usau_params(args), _ls_params(args)
    prediction_sets = []
    any_unconverged = False
    for s in slices:
        for method in _methods(args):
            table = _rate_one(s, method, usau_params, ls_params)
            any_unconverged |= _warn_table(table)
            prediction_sets.append(build_predictions(table, s, ls_params))
    if any_unconverged and args.strict:
        return EXIT_NONCONVERGED
    ingest.write_predictions(prediction_sets, args.output)
    print(args.output)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    _check_stage(args)
    slices = _load_slices(args)
    if not slices:
        _err("no games match the given filters")
        return EXIT_EMPTY
    usau_params, ls_params = _usau_params(args), _ls_params(args)
    reports = []
    any_unconverged = False
    for s in slices:
        for method in _methods(args):
            table = _rate_one(s, method, usau_params, ls_params)
            any_unconverged |= _warn_table(table)
            predictions = build_predictions(table, s, ls_params)
            reports.append(build_report(table, s, predictions))
    if any_unconverged and args.strict:
        return EXIT_NONCONVERGED
    ingest.write_metrics(reports, args.output)
    print(args.output)
    return EXIT_OK


def _published_ranks(table: RatingTable, ranked_only: bool) -> list[tuple[str, float]]:
    teams = [
        (team, rating)
        for team, rating in table.ratings.items()
        if not ranked_only or table.ranked.get(team, True)
    ]
    return sorted(teams, key=lambda kv: (-kv[1], kv[0]))


def cmd_top(args) -> int:
    _check_stage(args)
    slices = _load_slices(args)
    if not slices:
        _err("no games match the given filters")
        return EXIT_EMPTY
    if len(slices) > 1:
        raise ConfigError(
            "top needs one (season, division); narrow with --season/--division"
        )
    s = slices[0]
    usau_table = compute_usau(s, _usau_params(args))
    ls_table = compute_leastsq(s, _ls_params(args))
    unconverged = _warn_table(usau_table) | _warn_table(ls_table)
    if unconverged and args.strict:
        return EXIT_NONCONVERGED

    usau_rows = _published_ranks(usau_table, ranked_only=True)
    ls_rows = _published_ranks(ls_table, ranked_only=False)
    usau_rank = {team: i for i, (team, _) in enumerate(usau_rows, start=1)}

    n = min(args.top_n, len(usau_rows), len(ls_rows))
    rows = []
    for k in range(1, n + 1):
        u_team, u_rating = usau_rows[k - 1]
        l_team, l_rating = ls_rows[k - 1]
        u_rank_of_l = usau_rank.get(l_team)
        diff = "" if u_rank_of_l is None else str(u_rank_of_l - k)
        rows.append([
            k, u_team, f"{u_rating:.6f}", l_team, f"{l_rating:.6f}", diff,
        ])

    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["rank", "usau_team", "usau_rating", "ls_team", "ls_rating", "rank_diff"])
        writer.writerows(rows)
    finally:
        if args.output:
            out.close()
            print(args.output)
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.teams < 2:
        raise ConfigError("--teams must be >= 2")
    if args.rating_min >= args.rating_max:
        raise ConfigError("--rating-min must be below --rating-max")
    width = len(str(args.teams))
    step = (args.rating_max - args.rating_min) / (args.teams - 1)
    true_ratings = {
        f"T{i + 1:0{width}d}": args.rating_max - i * step for i in range(args.teams)
    }
    spec = SynthSpec(
        true_ratings=true_ratings,
        schedule=args.schedule,
        pod_size=args.pod_size,
        n_games=args.games,
        noise_sd=args.noise_sd,
        cap=args.cap,
        seed=args.seed,
        season=args.season or 2000,
        division=Division(args.division or "mens"),
        n_weeks=args.weeks,
    )
    try:
        season_slice = generate(spec)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    ingest.write_games(season_slice.games, args.output)
    print(args.output)
    return EXIT_OK


def _add_data_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="game CSV file or directory of CSVs")
    p.add_argument("--season", type=int, action="append", help="season filter, repeatable")
    p.add_argument("--division", choices=[d.value for d in Division], help="division filter")
    p.add_argument("--stage", choices=[s.value for s in Stage], default="regular",
                   help="game stage (ratings support regular only)")
    p.add_argument("--method", choices=["usau", "leastsq", "both"], default="both")
    p.add_argument("--tol", type=float, default=1e-6, help="power-rating convergence tolerance")
    p.add_argument("--max-iters", type=int, default=10000, help="power-rating iteration cap")
    p.add_argument("--ref-cap", type=int, default=15, help="least-squares reference goal cap")
    p.add_argument("--strict", action="store_true",
                   help="exit nonzero when a rating fails to converge")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ultirate",
        description="Rate ultimate teams from season game data and evaluate the ratings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="write rating tables per (season, division, method)")
    _add_data_options(p)
    p.add_argument("--output", required=True, help="output directory")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("predict", help="write per-game score differential predictions")
    _add_data_options(p)
    p.add_argument("--output", required=True, help="output CSV file")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="write MAD/MSE/violation metrics per season")
    _add_data_options(p)
    p.add_argument("--output", required=True, help="output CSV file")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("top", help="side-by-side top-N table for both methods")
    _add_data_options(p)
    p.add_argument("--top-n", type=int, default=25)
    p.add_argument("--output", help="output CSV file (default: stdout)")
    p.set_defaults(func=cmd_top)

    p = sub.add_parser("synth", help="generate a synthetic season CSV")
    p.add_argument("--output", required=True, help="output CSV file")
    p.add_argument("--teams", type=int, default=8)
    p.add_argument("--schedule", choices=["round_robin", "pods", "random"],
                   default="round_robin")
    p.add_argument("--pod-size", type=int, default=4)
    p.add_argument("--games", type=int, default=0, help="game count for --schedule random")
    p.add_argument("--noise-sd", type=float, default=0.0)
    p.add_argument("--cap", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weeks", type=int, default=8)
    p.add_argument("--season", type=int, default=2000)
    p.add_argument("--division", choices=[d.value for d in Division], default="mens")
    p.add_argument("--rating-min", type=float, default=-10.0)
    p.add_argument("--rating-max", type=float, default=10.0)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        _err(str(err))
        return EXIT_CONFIG
    except ingest.IngestError as err:
        _err(str(err))
        return EXIT_IO
    except OSError as err:
        _err(str(err))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
