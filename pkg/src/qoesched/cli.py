"""
Command line entry point.

    qoesched run <config.json> [--seed N] [--out DIR] [--controller {dqoes,even}]
    qoesched compare <a.csv> <b.csv>
    qoesched plot <run.csv> [--out DIR]

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .report import (
    FingerprintMismatch,
    compare,
    export_csv,
    load_csv,
    plot_csv,
    read_fingerprint,
    summary_from_reports,
    write_sidecar,
)
from .sim import run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3

log = logging.getLogger("qoesched")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.controller is not None:
        overrides["controller"] = args.controller
    if overrides:
        cfg = cfg.with_overrides(**overrides)
    out_dir = Path(args.out or cfg.output or ".")
    out_dir.mkdir(parents=True, exist_ok=True)

    summary, reports = run_scenario(cfg)
    csv_path = export_csv(reports, out_dir / f"{cfg.name}_{cfg.controller}.csv")
    write_sidecar(summary, csv_path, cfg.fingerprint(), cfg.controller)

    print(f"{cfg.name} [{cfg.controller}] seed={cfg.seed}: {len(reports)} control steps -> {csv_path}")
    for wid, n in summary.satisfied_by_worker().items():
        classes = summary.steady_classes(wid)
        counts = {c: sum(1 for v in classes.values() if v.value == c) for c in "GSB"}
        print(f"  {wid}: satisfied {n}  steady G/S/B = {counts['G']}/{counts['S']}/{counts['B']}")
    return EXIT_OK


def cmd_compare(args) -> int:
    a = summary_from_reports(load_csv(args.csv_a))
    b = summary_from_reports(load_csv(args.csv_b))
    result = compare(a, b, read_fingerprint(args.csv_a), read_fingerprint(args.csv_b))
    for line in result.lines(Path(args.csv_a).stem, Path(args.csv_b).stem):
        print(line)
    return EXIT_OK


def cmd_plot(args) -> int:
    for path in plot_csv(args.csv, args.out):
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qoesched", description="QoE-driven CPU limit scheduling simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a scenario and export per-step CSV")
    p.add_argument("config")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--controller", choices=("dqoes", "even"))
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="compare steady-state satisfied counts of two runs")
    p.add_argument("csv_a")
    p.add_argument("csv_b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="plot quality and share trajectories from a run CSV")
    p.add_argument("csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, FingerprintMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
