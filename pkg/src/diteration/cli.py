"""Command-line driver.

Exit codes: 0 on success, 1 on invalid arguments, 2 if any solve hit
``--max-cycles`` without converging.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import OpenMode, StopRule
from .experiments import EXPERIMENTS, ExperimentConfig, PROFILE_HEADER, emit_report, run_experiment
from .grid import ProblemError

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diteration", description=__doc__.splitlines()[0])
    p.add_argument("--experiment", choices=EXPERIMENTS, default="solve")
    p.add_argument("--method", choices=("gs", "di"), default="di")
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--edge-x0", type=float, default=0.0)
    p.add_argument("--edge-x1", type=float, default=0.0)
    p.add_argument("--edge-y0", type=float, default=100.0)
    p.add_argument("--edge-y1", type=float, default=0.0)
    p.add_argument("--problem", metavar="PATH", help="problem file (key=value + pin lines)")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=4.0)
    p.add_argument("--open-mode", choices=[m.value for m in OpenMode], default="none")
    p.add_argument("--stop-rule", choices=[r.value for r in StopRule], default="moved")
    p.add_argument("--max-cycles", type=int, default=100_000)
    p.add_argument("--holes", type=int, default=0, help="random pinned interior cells")
    p.add_argument("--hole-min", type=float, default=0.0)
    p.add_argument("--hole-max", type=float, default=1000.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", metavar="PATH", help="CSV output (default: stdout)")
    p.add_argument("--profile-out", metavar="PATH", help="per-y diffusion CSV (solve, holes)")
    p.add_argument("--compare-gs", action="store_true", help="profile: add GS collections column")
    p.add_argument("--optimized", action="store_true", help="costs: measure optimized loops")
    p.add_argument("--desk", action="store_true", help="shrink experiments to 100-wide grids")
    return p


def config_from_args(args) -> ExperimentConfig:
    return ExperimentConfig(
        experiment=args.experiment,
        nx=args.nx,
        ny=args.ny,
        edge_x0=args.edge_x0,
        edge_x1=args.edge_x1,
        edge_y0=args.edge_y0,
        edge_y1=args.edge_y1,
        problem_file=args.problem,
        method=args.method,
        epsilon=args.epsilon,
        delta=args.delta,
        open_mode=OpenMode(args.open_mode),
        max_cycles=args.max_cycles,
        stop_rule=StopRule(args.stop_rule),
        holes=args.holes,
        hole_min=args.hole_min,
        hole_max=args.hole_max,
        seed=args.seed,
        desk=args.desk,
        compare_gs=args.compare_gs,
        unoptimized=not args.optimized,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        # build once up front so geometry errors surface as usage errors
        if cfg.experiment != "costs":
            cfg.problem()
    except (ValueError, ProblemError, OSError) as exc:
        print(f"diteration: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    result = run_experiment(cfg)
    try:
        text = emit_report(result.rows, result.header, args.out)
        if args.out is None:
            sys.stdout.write(text)
        if args.profile_out and result.profile is not None:
            header = PROFILE_HEADER + (("collections",) if "collections" in result.profile[0] else ())
            emit_report(result.profile, header, Path(args.profile_out))
    except OSError as exc:
        print(f"diteration: error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if not result.converged:
        print("diteration: warning: a solve did not converge within --max-cycles", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
