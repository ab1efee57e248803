#!/usr/bin/env python3
"""
Seed sweep of the four-worker cluster scenario: adaptive controller against
even sharing, per-worker steady-state satisfied counts and their ratio.

    python scripts/cluster_comparison.py [--seeds 10] [--duration 3000]
"""

import argparse
from pathlib import Path

from qoesched.config import load_config
from qoesched.sim import run_scenario

CONFIG = Path(__file__).resolve().parents[1] / "scenarios" / "cluster.json"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", type=Path, default=CONFIG)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--duration", type=float)
    ap.add_argument("--ratio", type=float, default=4.0, help="required total ratio for a seed to count")
    args = ap.parse_args()

    base = load_config(args.config)
    if args.duration:
        base = base.with_overrides(duration=args.duration)

    good = 0
    for seed in range(args.seeds):
        a = run_scenario(base.with_overrides(seed=seed, controller="dqoes"))[0].satisfied_by_worker()
        b = run_scenario(base.with_overrides(seed=seed, controller="even"))[0].satisfied_by_worker()
        ta, tb = sum(a.values()), sum(b.values())
        ratio = f"{ta / tb:5.2f}" if tb else f">= {ta}"
        ok = all(a[w] >= b[w] for w in b) and ta >= args.ratio * tb
        good += ok
        print(f"seed {seed:3d}  adaptive {list(a.values())} = {ta:2d}   even {list(b.values())} = {tb:2d}"
              f"   ratio {ratio}   {'ok' if ok else '--'}")
    print(f"{good}/{args.seeds} seeds meet per-worker dominance and the {args.ratio:g}x total ratio")


if __name__ == "__main__":
    main()
