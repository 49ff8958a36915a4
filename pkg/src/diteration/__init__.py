"""D-iteration and Gauss-Seidel solvers for 2D Dirichlet heat problems."""

from .config import OpenMode, SolveConfig, SolveReport, StopRule
from .diffusion import CellGate, FluidState, di_cycle, di_solve, diffuse, fluid_residual, initial_fluid
from .gauss_seidel import gs_cycle, gs_solve, initial_field
from .grid import (
    PAPER_EDGES,
    DirichletSpec,
    GridProblem,
    GridSpec,
    LinearSystemView,
    ProblemError,
    as_linear_system,
    build_problem,
    exact_solution_1cell,
    make_problem,
    random_holes,
)

__all__ = [
    "CellGate",
    "DirichletSpec",
    "FluidState",
    "GridProblem",
    "GridSpec",
    "LinearSystemView",
    "OpenMode",
    "PAPER_EDGES",
    "ProblemError",
    "SolveConfig",
    "SolveReport",
    "StopRule",
    "as_linear_system",
    "build_problem",
    "di_cycle",
    "di_solve",
    "diffuse",
    "exact_solution_1cell",
    "fluid_residual",
    "gs_cycle",
    "gs_solve",
    "initial_field",
    "initial_fluid",
    "make_problem",
    "random_holes",
]
