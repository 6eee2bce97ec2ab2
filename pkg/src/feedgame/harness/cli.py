"""Command line entry point: ``feedgame run|sweep|analyze|compare``.

Exit codes: 0 success, 1 usage error, 2 run failure, 3 failed expectation.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from feedgame.harness.config import ConfigError, RunConfig, load_config, parse_value
from feedgame.harness.expect import ExpectationError, check, load_expectations
from feedgame.harness.files import FormatError, format_metrics, write_metrics
from feedgame.harness.outputs import analyze, save_run
from feedgame.harness.runner import ReplayMismatch, run
from feedgame.harness.sweep import STANDARD_FOCUS, Report, format_report, sweep

EXIT_OK, EXIT_USAGE, EXIT_RUN, EXIT_EXPECT = 0, 1, 2, 3

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p: argparse.ArgumentParser, skip=()) -> None:
    p.add_argument("--config", help="plain-text 'key = value' config file")
    for f in dataclasses.fields(RunConfig):
        if f.name in skip:
            continue
        p.add_argument(f"--{f.name.replace('_', '-')}", dest=f"cfg_{f.name}", metavar="VALUE")


def _build_config(args, **forced) -> RunConfig:
    values = {}
    for f in dataclasses.fields(RunConfig):
        raw = getattr(args, f"cfg_{f.name}", None)
        if raw is not None:
            values[f.name] = parse_value(f.name, raw)
    values.update(forced)
    if args.config:
        return load_config(args.config, **values)
    return RunConfig(**values)


def parse_seeds(text: str) -> list[int]:
    """``"0-9"``, ``"1,3,5"`` or a mix such as ``"0-4,10"``."""
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise ValueError("no seeds given")
    return seeds


def cmd_run(args) -> int:
    config = _build_config(args)
    result = run(config)
    print(format_metrics(result.metrics, f"focus {config.policy_label}, seed {config.seed}"), end="")
    if config.out:
        out = save_run(result, config.out)
        print(f"wrote {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    base = _build_config(args)
    focus = [f for f in args.focus.split(",") if f.strip()]
    seeds = parse_seeds(args.seeds)
    report = sweep(base, focus, seeds, jobs=args.jobs, out=args.out)
    print(format_report(report), end="")
    if args.out:
        print(f"wrote {Path(args.out) / 'report.json'}")
    return EXIT_RUN if report.failures else EXIT_OK


def cmd_analyze(args) -> int:
    metrics = analyze(args.path)
    print(format_metrics(metrics, str(args.path)), end="")
    if args.out:
        write_metrics(args.out, metrics)
    return EXIT_OK


def cmd_compare(args) -> int:
    reports = [Report.load(p) for p in args.reports]
    for path, rep in zip(args.reports, reports):
        print(f"## {path}")
        print(format_report(rep))
    if not args.expect:
        return EXIT_OK
    expectations = load_expectations(args.expect)
    failed = 0
    for rep in reports:
        for outcome in check(rep, expectations):
            print(outcome.describe())
            failed += not outcome.passed
    print(f"{failed} expectation(s) failed" if failed else "all expectations met")
    return EXIT_EXPECT if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="feedgame", description="Feed-game closure-mechanism simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one simulation")
    _add_config_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run focus policies x seeds and aggregate")
    _add_config_flags(p, skip=("seed", "focus", "out"))
    p.add_argument("--focus", default=",".join(STANDARD_FOCUS), help="comma-separated focus values or 'var'")
    p.add_argument("--seeds", default="0-9", help="e.g. 0-9 or 1,2,5")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--out", help="directory for per-run outputs and report.json")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("analyze", help="recompute metrics from a run log, snapshot or run directory")
    p.add_argument("path", type=Path)
    p.add_argument("--out", help="write metrics JSON here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", help="print sweep reports side by side and check expectations")
    p.add_argument("reports", nargs="+", type=Path)
    p.add_argument("--expect", type=Path, help="expectation file; failing checks exit with 3")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (FormatError, OSError, ReplayMismatch) as exc:
        print(f"feedgame: {exc}", file=sys.stderr)
        return EXIT_RUN
    except (ConfigError, ExpectationError, ValueError) as exc:
        print(f"feedgame: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
