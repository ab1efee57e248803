#!/usr/bin/env python3
"""
Run every shipped scenario under both controllers and print steady-state
results side by side.  With --out, CSVs, summaries and plots are written too.

    python scripts/run_scenarios.py [--seed N] [--out results/] [--plots]
"""

import argparse
import time
from pathlib import Path

from qoesched.config import load_config
from qoesched.model import QoEClass
from qoesched.report import export_csv, plot_csv, write_sidecar
from qoesched.sim import run_scenario

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, help="override every scenario's seed")
    ap.add_argument("--out", type=Path)
    ap.add_argument("--plots", action="store_true", help="also write trajectory PNGs (needs --out)")
    ap.add_argument("names", nargs="*", help="scenario names (default: all)")
    args = ap.parse_args()

    paths = [SCENARIOS / f"{n}.json" for n in args.names] or sorted(SCENARIOS.glob("*.json"))
    print(f"{'scenario':<20}{'controller':<11}{'satisfied':>10}{'G/S/B':>10}{'steps':>7}{'wall[s]':>9}")
    for path in paths:
        cfg = load_config(path)
        if args.seed is not None:
            cfg = cfg.with_overrides(seed=args.seed)
        for controller in ("dqoes", "even"):
            run_cfg = cfg.with_overrides(controller=controller)
            t0 = time.perf_counter()
            summary, reports = run_scenario(run_cfg)
            wall = time.perf_counter() - t0
            census = summary.census()
            gsb = "/".join(str(census[c]) for c in (QoEClass.G, QoEClass.S, QoEClass.B))
            sat = sum(summary.satisfied_by_worker().values())
            print(f"{cfg.name:<20}{controller:<11}{sat:>10}{gsb:>10}{len(reports):>7}{wall:>9.2f}")
            if args.out:
                args.out.mkdir(parents=True, exist_ok=True)
                csv_path = export_csv(reports, args.out / f"{cfg.name}_{controller}.csv")
                write_sidecar(summary, csv_path, run_cfg.fingerprint(), controller)
                if args.plots:
                    plot_csv(csv_path, args.out / "plots")


if __name__ == "__main__":
    main()
