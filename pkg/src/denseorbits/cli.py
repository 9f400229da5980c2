"""Command-line front end: run scenario files and reproduce showcase ids."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .groups import CapExceeded
from .reports import csv_rows_for, write_csv
from .reproduce import list_examples, reproduce
from .scenarios import ScenarioError, default_cap, load_scenario, run_scenario
from .weights import SearchBoundExceeded


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="denseorbits",
        description="Exact analyses of dense translation orbits on weighted "
                    "lp spaces: witness searches, certificates, and the "
                    "constructive assembly of candidate dense vectors.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a JSON scenario file")
    run.add_argument("scenario", help="path to the scenario file")
    _common_flags(run)

    rep = sub.add_parser("reproduce", help="run a canned showcase analysis")
    rep.add_argument("example_id", help="one of the ids from list-examples")
    _common_flags(rep)

    sub.add_parser("list-examples", help="list the canned showcase analyses")
    return parser


def _common_flags(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--output", metavar="PATH", help="write the JSON report here")
    cmd.add_argument("--csv", metavar="PATH",
                     help="write advisory plot data (floats) here")
    cmd.add_argument("--cap", type=int, default=None, metavar="N",
                     help="enumeration cap (default from DENSEORBITS_CAP or 10^6)")
    cmd.add_argument("--horizon", type=int, default=None, metavar="N",
                     help="override the dominant scan depth of the analysis")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "list-examples":
        for name, description in list_examples():
            print(f"{name}: {description}")
        return 0

    try:
        if args.command == "run":
            scenario = load_scenario(args.scenario)
            if args.cap is not None:
                scenario.cap = args.cap
            if args.horizon is not None:
                scenario.options = dict(scenario.options, horizon=args.horizon)
            report = run_scenario(scenario)
        else:
            cap = args.cap if args.cap is not None else default_cap()
            report = reproduce(args.example_id, horizon=args.horizon, cap=cap)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, SearchBoundExceeded) as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.output:
        report.write(args.output)
    if args.csv:
        header, rows = csv_rows_for(report.analysis, report.verdicts)
        write_csv(args.csv, header, rows)

    for line in report.summary:
        print(f"- {line}")
    if not args.output:
        print(report.to_json())
    else:
        print(f"report written to {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
