"""Experiment drivers: each returns CSV-ready rows.

Default sizes are the full 1000-wide grids; ``desk=True`` shrinks every
experiment to a 100-wide grid so a whole suite runs in seconds.
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .config import OpenMode, SolveConfig, SolveReport, StopRule
from .diffusion import di_solve
from .gauss_seidel import gs_solve
from .grid import DirichletSpec, GridProblem, GridSpec, build_problem, load_problem, random_holes

REPORT_HEADER = (
    "experiment", "method", "nx", "ny", "epsilon", "delta", "open_mode",
    "cycles", "ops", "dc_tests", "wall_seconds", "converged",
)
PROFILE_HEADER = ("y", "diffusions")
COST_HEADER = ("experiment", "method", "nx", "ny", "nb_iter", "alpha", "alpha_beta", "beta", "c")

TABLE1_DELTAS = (1, 2, 3, 4, 5, 6, 7, 8, 16)
TABLE_NY = {
    "table2": (1000, 2000, 3000, 4000, 5000),
    "table3": (25, 50, 100, 1000, 2000, 3000, 4000, 5000),
    "table4": (50, 100, 1000, 2000, 3000, 4000, 5000),
}
DESK_TABLE_NY = {
    "table2": (100, 200, 300, 400, 500),
    "table3": (25, 50, 100, 200, 300, 400, 500),
    "table4": (50, 100, 200, 300, 400, 500),
}
TABLE_MODE = {"table2": OpenMode.NONE, "table3": OpenMode.TWO, "table4": OpenMode.TRI}
COST_SHAPES = ((100, 100), (200, 200), (1000, 1000), (100, 1000), (200, 5000), (5000, 200))
DESK_COST_SHAPES = ((100, 100), (200, 200), (100, 400), (400, 100))

EXPERIMENTS = ("solve", "table1", "table2", "table3", "table4", "profile", "holes", "costs")


@dataclass
class ExperimentConfig:
    experiment: str = "solve"
    nx: int | None = None
    ny: int | None = None
    edge_x0: float = 0.0
    edge_x1: float = 0.0
    edge_y0: float = 100.0
    edge_y1: float = 0.0
    problem_file: str | None = None
    method: str = "di"
    epsilon: float = 0.1
    delta: float = 4.0
    open_mode: OpenMode = OpenMode.NONE
    max_cycles: int = 100_000
    stop_rule: StopRule = StopRule.MOVED
    holes: int = 0
    hole_min: float = 0.0
    hole_max: float = 1000.0
    seed: int | None = None
    desk: bool = False
    compare_gs: bool = False
    unoptimized: bool = True
    pins: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.method not in ("gs", "di"):
            raise ValueError(f"method must be gs or di, got {self.method!r}")
        if self.holes < 0:
            raise ValueError("--holes must be >= 0")
        if self.holes > 0 and self.seed is None:
            raise ValueError("a --seed is required when --holes > 0")
        if self.hole_min > self.hole_max:
            raise ValueError("--hole-min must not exceed --hole-max")
        # validates epsilon/delta/max_cycles
        self.solve_config()

    @property
    def default_size(self) -> int:
        return 100 if self.desk else 1000

    def solve_config(self, **overrides) -> SolveConfig:
        kw = dict(
            epsilon=self.epsilon,
            delta=self.delta,
            open_mode=self.open_mode,
            max_cycles=self.max_cycles,
            stop_rule=self.stop_rule,
        )
        kw.update(overrides)
        return SolveConfig(**kw)

    def problem(self, nx: int | None = None, ny: int | None = None) -> GridProblem:
        if self.problem_file is not None:
            base = load_problem(self.problem_file)
            grid, dirichlet = base.grid, base.dirichlet
        else:
            grid = GridSpec(nx or self.nx or self.default_size, ny or self.ny or self.default_size)
            dirichlet = DirichletSpec(
                self.edge_x0, self.edge_x1, self.edge_y0, self.edge_y1, pinned=self.pins
            )
        if self.holes:
            taken = {(x, y) for x, y, _ in dirichlet.pinned}
            extra = [
                h for h in random_holes(grid, self.holes, self.seed, self.hole_min, self.hole_max)
                if (h[0], h[1]) not in taken
            ]
            dirichlet = replace(dirichlet, pinned=dirichlet.pinned + tuple(extra))
        return build_problem(grid, dirichlet)


def solve(problem: GridProblem, method: str, config: SolveConfig) -> SolveReport:
    return gs_solve(problem, config) if method == "gs" else di_solve(problem, config)


def report_row(experiment: str, report: SolveReport, problem: GridProblem, config: SolveConfig) -> dict:
    return {
        "experiment": experiment,
        "method": report.method,
        "nx": problem.nx,
        "ny": problem.ny,
        "epsilon": repr(config.epsilon),
        "delta": repr(config.delta) if report.method == "di" else "",
        "open_mode": config.open_mode.value if report.method == "di" else "",
        "cycles": report.cycles,
        "ops": report.op_count,
        "dc_tests": report.dc_tests,
        "wall_seconds": f"{report.wall_time:.6f}",
        "converged": "true" if report.converged else "false",
    }


def profile_rows(di_report: SolveReport, gs_report: SolveReport | None = None) -> list[dict]:
    """One row per interior y."""
    ny = len(di_report.per_y_ops)
    rows = []
    for y in range(1, ny - 1):
        row = {"y": y, "diffusions": int(di_report.per_y_ops[y])}
        if gs_report is not None:
            row["collections"] = int(gs_report.per_y_ops[y])
        rows.append(row)
    return rows


@dataclass
class ExperimentResult:
    rows: list[dict]
    header: tuple
    profile: list[dict] | None = None
    reports: list[SolveReport] = field(default_factory=list, repr=False)

    @property
    def converged(self) -> bool:
        return all(r.converged for r in self.reports)


def run_solve(cfg: ExperimentConfig) -> ExperimentResult:
    problem = cfg.problem()
    sc = cfg.solve_config()
    rep = solve(problem, cfg.method, sc)
    prof = profile_rows(rep) if cfg.method == "di" else None
    return ExperimentResult([report_row("solve", rep, problem, sc)], REPORT_HEADER, prof, [rep])


def run_table1(cfg: ExperimentConfig, deltas=TABLE1_DELTAS) -> ExperimentResult:
    problem = cfg.problem()
    rows, reps = [], []
    for d in deltas:
        sc = cfg.solve_config(delta=float(d))
        rep = di_solve(problem, sc)
        rows.append(report_row("table1", rep, problem, sc))
        reps.append(rep)
    return ExperimentResult(rows, REPORT_HEADER, None, reps)


def run_ny_table(cfg: ExperimentConfig, table: str, ny_values=None) -> ExperimentResult:
    """Tables 2, 3 and 4: GS vs DI as ny grows, differing in the DI open mode."""
    if ny_values is None:
        ny_values = (DESK_TABLE_NY if cfg.desk else TABLE_NY)[table]
    nx = cfg.nx or cfg.default_size
    rows, reps = [], []
    for ny in ny_values:
        problem = cfg.problem(nx, ny)
        gs_cfg = cfg.solve_config()
        di_cfg = cfg.solve_config(open_mode=TABLE_MODE[table])
        for method, sc in (("gs", gs_cfg), ("di", di_cfg)):
            rep = solve(problem, method, sc)
            rows.append(report_row(table, rep, problem, sc))
            reps.append(rep)
    return ExperimentResult(rows, REPORT_HEADER, None, reps)


def run_profile(cfg: ExperimentConfig) -> ExperimentResult:
    problem = cfg.problem()
    sc = cfg.solve_config()
    di_rep = di_solve(problem, sc)
    reps = [di_rep]
    gs_rep = None
    if cfg.compare_gs:
        gs_rep = gs_solve(problem, sc)
        reps.append(gs_rep)
    header = PROFILE_HEADER + (("collections",) if cfg.compare_gs else ())
    rows = profile_rows(di_rep, gs_rep)
    return ExperimentResult(rows, header, rows, reps)


def run_holes(cfg: ExperimentConfig) -> ExperimentResult:
    problem = cfg.problem()
    sc = cfg.solve_config()
    gs_rep = gs_solve(problem, sc)
    di_rep = di_solve(problem, sc)
    rows = [report_row("holes", r, problem, sc) for r in (gs_rep, di_rep)]
    return ExperimentResult(rows, REPORT_HEADER, profile_rows(di_rep, gs_rep), [gs_rep, di_rep])


def run_costs(cfg: ExperimentConfig, shapes=None, target_visits: float = 1e7) -> ExperimentResult:
    from .costmodel import measure_cost_table

    if shapes is None:
        shapes = DESK_COST_SHAPES if cfg.desk else COST_SHAPES
    ests = measure_cost_table(shapes, target_visits=target_visits, unoptimized=cfg.unoptimized)
    rows = []
    for e in ests:
        d = asdict(e)
        rows.append({
            "experiment": "costs",
            "method": e.method,
            "nx": e.nx,
            "ny": e.ny,
            "nb_iter": e.nb_iter,
            "alpha": f"{d['alpha']:.4e}",
            "alpha_beta": f"{e.alpha_beta:.4e}",
            "beta": f"{d['beta']:.4e}",
            "c": f"{d['c']:.4e}",
        })
    return ExperimentResult(rows, COST_HEADER)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    exp = cfg.experiment
    if exp == "solve":
        return run_solve(cfg)
    if exp == "table1":
        return run_table1(cfg)
    if exp in TABLE_MODE:
        return run_ny_table(cfg, exp)
    if exp == "profile":
        return run_profile(cfg)
    if exp == "holes":
        return run_holes(cfg)
    return run_costs(cfg)


def format_csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(header), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def emit_report(rows, header, out=None) -> str:
    """Serialize rows to CSV; write to ``out`` if given and return the text."""
    text = format_csv(rows, header)
    if out is not None:
        Path(out).write_text(text)
    return text
