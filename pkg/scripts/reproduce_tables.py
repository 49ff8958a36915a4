"""Run every comparison experiment and write one CSV per experiment.

    python scripts/reproduce_tables.py --out results/          # full size, ~5 min
    python scripts/reproduce_tables.py --out results/ --desk   # 100-wide, seconds
"""

import argparse
import time
from pathlib import Path

from diteration.experiments import PROFILE_HEADER, ExperimentConfig, emit_report, run_experiment

EXPERIMENTS = ["table1", "table2", "table3", "table4", "profile", "holes", "costs"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--desk", action="store_true")
    ap.add_argument("--seed", type=int, default=0, help="seed for the holes experiment")
    ap.add_argument("--only", nargs="*", choices=EXPERIMENTS)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for name in args.only or EXPERIMENTS:
        cfg = ExperimentConfig(experiment=name, desk=args.desk, compare_gs=name == "profile")
        if name == "holes":
            cfg = ExperimentConfig(experiment=name, desk=args.desk, holes=10, seed=args.seed)
        t0 = time.perf_counter()
        res = run_experiment(cfg)
        emit_report(res.rows, res.header, args.out / f"{name}.csv")
        if name == "holes":
            emit_report(res.profile, PROFILE_HEADER + ("collections",), args.out / "holes_profile.csv")
        print(f"{name:8s} {len(res.rows):4d} rows  {time.perf_counter() - t0:6.1f}s")


if __name__ == "__main__":
    main()
