"""Scenario-driven command line.

Subcommands: `run` executes every query of a scenario file, `verify-all`
runs the bundled acceptance suite, and each query family (`gb`,
`invariants`, `decompose`, `support`, `tower`, `spc`) reruns only its own
queries from a scenario.  A scenario argument is a file path or the name
of a bundled scenario.

Exit codes: 0 when every executed check passes, 1 on a verification
failure, 2 on an input problem (unparseable file, schema violation,
unresolved label).  Text reports are byte-identical across runs for a
fixed (input, seed, version); `--json` additionally writes the machine
report, which validates against the published report schema.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import __version__, verify
from .scenario import (
    RunOptions,
    ScenarioError,
    bundled_scenarios,
    load_scenario,
    render_report_text,
    report_to_json,
    run_scenario,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


def _add_scenario_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("scenario",
                     help="scenario file path or bundled scenario name")
    sub.add_argument("--field", default=None,
                     help="override the scenario field ('Q' or 'Fp:<p>')")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed recorded in the report (default 0)")
    sub.add_argument("--degree-bound", type=int, default=None,
                     help="default degree bound for bounded computations")
    sub.add_argument("--json", dest="json_path", default=None, metavar="PATH",
                     help="also write the machine report to PATH")
    sub.add_argument("--strict", action="store_true",
                     help="stop at the first query that raises")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttkit",
        description="scenario-driven checks for equivariant and "
                    "supercommutative module geometry",
        epilog=f"bundled scenarios: {', '.join(bundled_scenarios())}",
    )
    parser.add_argument("--version", action="version",
                        version=f"ttkit {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="execute every query of a scenario")
    _add_scenario_args(run)
    run.set_defaults(only_op=None)

    for op, blurb in (
        ("gb", "basis and membership queries"),
        ("invariants", "invariant ring queries"),
        ("decompose", "canonical decomposition queries"),
        ("support", "support queries"),
        ("tower", "tower queries"),
        ("spc", "support-data and spectrum queries"),
    ):
        sub = subs.add_parser(op, help=f"run only the scenario's {blurb}")
        _add_scenario_args(sub)
        sub.set_defaults(only_op=op)

    va = subs.add_parser("verify-all", help="run the bundled acceptance suite")
    va.add_argument("--seed", type=int, default=verify.DEFAULT_SEED,
                    help=f"corpus seed (default {verify.DEFAULT_SEED})")
    va.add_argument("--json", dest="json_path", default=None, metavar="PATH",
                    help="also write the machine report to PATH")
    va.set_defaults(only_op=None)
    return parser


def _write_json(path: str, doc: dict) -> None:
    try:
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as e:
        raise ScenarioError("--json", str(e)) from None


def _run_verify_all(args) -> int:
    results = verify.run_all(args.seed)
    sys.stdout.write(verify.render_text(results, args.seed))
    if args.json_path:
        _write_json(args.json_path, verify.report_json(results, args.seed))
    return EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL


def _run_scenario_command(args) -> int:
    scn = load_scenario(args.scenario, args.field)
    options = RunOptions(seed=args.seed, degree_bound=args.degree_bound,
                         strict=args.strict)
    results = run_scenario(scn, options, args.only_op)
    sys.stdout.write(render_report_text("scenario", scn.name, results, args.seed))
    if args.json_path:
        _write_json(args.json_path,
                    report_to_json("scenario", scn.name, results, args.seed))
    return EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify-all":
            return _run_verify_all(args)
        return _run_scenario_command(args)
    except ScenarioError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
