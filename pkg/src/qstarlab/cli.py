"""Experiment runner.

Subcommands: `run <config>` executes scenarios from a JSON config, `list`
prints the built-in replication catalog, `replicate [id]` runs one or all
built-in scenarios.  Exit codes: 0 success, 1 at least one scenario failed,
2 config or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from .scenarios import (ConfigError, SCENARIOS, ScenarioOutcome, list_catalog,
                        parse_config, run_scenario, write_outcome)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qstarlab",
        description="Numerical probes for extending *-representations by closure")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized probe families (default 0)")
    parser.add_argument("--out-dir", default="out",
                        help="directory for result files (default ./out)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="emit tables as CSV files or embed them in JSON")
    parser.add_argument("--jobs", type=int, default=1,
                        help="scenario-level parallelism bound")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run scenarios from a JSON config")
    run_p.add_argument("config", help="path to the config file")

    list_p = sub.add_parser("list", help="print the built-in catalog")
    list_p.add_argument("--module", default=None,
                        help="only scenarios of this module")
    list_p.add_argument("--machine", action="store_true",
                        help="JSON catalog instead of text")

    rep_p = sub.add_parser("replicate",
                           help="run built-in replication scenarios")
    rep_p.add_argument("example", nargs="?", default=None,
                       help="scenario id (default: all)")
    return parser


def _run_all(scenarios, seed: int, jobs: int, out_dir: str, fmt: str) -> int:
    outcomes: list[ScenarioOutcome] = []
    try:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(run_scenario, sc, seed)
                           for sc in scenarios]
                outcomes = [f.result() for f in futures]
        else:
            outcomes = [run_scenario(sc, seed) for sc in scenarios]
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    failed = 0
    for outcome in sorted(outcomes, key=lambda o: o.scenario_id):
        write_outcome(outcome, out_dir, fmt)
        status = "pass" if outcome.passed else "FAIL"
        print(f"{outcome.scenario_id}: {status}")
        failed += 0 if outcome.passed else 1
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "list":
        items = list_catalog(args.module)
        if args.machine:
            payload = [{"id": s.scenario_id, "module": s.module,
                        "operation": s.operation, "parameters": s.parameters,
                        "description": s.description} for s in items]
            print(json.dumps(payload, sort_keys=True, indent=1))
        else:
            for s in items:
                print(f"{s.scenario_id:10s} {s.module:15s} {s.operation}")
                print(f"{'':10s} {s.description}")
        return 0

    if args.command == "run":
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 2
        except json.JSONDecodeError as exc:
            print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
            return 2
        try:
            scenarios = parse_config(data)
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        return _run_all(scenarios, args.seed, args.jobs, args.out_dir,
                        args.format)

    if args.command == "replicate":
        if args.example is not None:
            if args.example not in SCENARIOS:
                print(f"error: unknown example {args.example!r}; "
                      f"known: {', '.join(sorted(SCENARIOS))}", file=sys.stderr)
                return 2
            picked = [SCENARIOS[args.example]]
        else:
            picked = list_catalog()
        return _run_all(picked, args.seed, args.jobs, args.out_dir, args.format)

    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
