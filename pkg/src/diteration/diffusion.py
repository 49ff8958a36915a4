"""D-iteration: diffusion of fluid F into history H over the heat stencil.

Starting from ``H = 0`` and ``F = b``, diffusing a Free cell moves its whole
fluid ``f`` into ``H`` and credits ``f/4`` to each of its four neighbors.
Credits landing on a Fixed cell leave the system. Throughout the run
``F = b + A H - H``, so ``H`` converges to the solution of ``x = A x + b``.

A cell is diffused when visited only if ``F > epsilon / delta`` (the
diffusion condition, DC). The optional open gate skips the DC test for
cells that failed it and have received no fluid since.

Arrays are full ``(nx, ny)`` grids. ``F`` at Fixed cells accumulates the
fluid absorbed there and is never diffused.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .config import OpenMode, SolveConfig, SolveReport, StopRule
from .grid import NEIGHBOR_OFFSETS, GridProblem, LinearSystemView

BOUNDARY, CLOSED, OPEN = 0, 1, 2


@dataclass
class FluidState:
    F: np.ndarray
    H: np.ndarray


@dataclass
class CellGate:
    """Per-cell open state.

    ``state`` is None for ``OpenMode.NONE``, a bool array for ``TWO`` and an
    int8 array of BOUNDARY/CLOSED/OPEN for ``TRI``.
    """

    mode: OpenMode
    state: np.ndarray | None

    @classmethod
    def for_problem(cls, problem: GridProblem, mode: OpenMode) -> "CellGate":
        mode = OpenMode(mode)
        if mode is OpenMode.NONE:
            return cls(mode, None)
        if mode is OpenMode.TWO:
            return cls(mode, np.ones(problem.shape, dtype=np.bool_))
        state = np.where(problem.fixed, BOUNDARY, OPEN).astype(np.int8)
        return cls(mode, state)

    def is_open(self, x: int, y: int) -> bool:
        if self.state is None:
            return True
        return bool(self.state[x, y] == OPEN) if self.mode is OpenMode.TRI else bool(self.state[x, y])


class CycleStats(NamedTuple):
    diffusions: int
    dc_tests: int
    max_moved: float


@njit(cache=True)
def _cycle_plain(F, H, fixed, thr, per_y):
    nx, ny = F.shape
    diffusions = 0
    tests = 0
    max_moved = 0.0
    for x in range(nx):
        for y in range(ny):
            if fixed[x, y]:
                continue
            tests += 1
            f = F[x, y]
            if f > thr:
                H[x, y] += f
                F[x, y] = 0.0
                r = 0.25 * f
                F[x - 1, y] += r
                F[x, y - 1] += r
                F[x + 1, y] += r
                F[x, y + 1] += r
                diffusions += 1
                per_y[y] += 1
                if f > max_moved:
                    max_moved = f
    return diffusions, tests, max_moved


@njit(cache=True)
def _cycle_two(F, H, fixed, opn, thr, per_y):
    nx, ny = F.shape
    diffusions = 0
    tests = 0
    max_moved = 0.0
    for x in range(nx):
        for y in range(ny):
            if fixed[x, y] or not opn[x, y]:
                continue
            tests += 1
            f = F[x, y]
            if f > thr:
                H[x, y] += f
                F[x, y] = 0.0
                r = 0.25 * f
                F[x - 1, y] += r
                F[x, y - 1] += r
                F[x + 1, y] += r
                F[x, y + 1] += r
                opn[x - 1, y] = True
                opn[x, y - 1] = True
                opn[x + 1, y] = True
                opn[x, y + 1] = True
                diffusions += 1
                per_y[y] += 1
                if f > max_moved:
                    max_moved = f
            else:
                opn[x, y] = False
    return diffusions, tests, max_moved


@njit(cache=True)
def _cycle_tri(F, H, state, thr, per_y):
    nx, ny = F.shape
    diffusions = 0
    tests = 0
    max_moved = 0.0
    for x in range(nx):
        for y in range(ny):
            if state[x, y] != 2:
                continue
            tests += 1
            f = F[x, y]
            if f > thr:
                H[x, y] += f
                F[x, y] = 0.0
                r = 0.25 * f
                F[x - 1, y] += r
                F[x, y - 1] += r
                F[x + 1, y] += r
                F[x, y + 1] += r
                # 1 -> 2, while 0 (boundary) and 2 stay put
                state[x - 1, y] += state[x - 1, y] == 1
                state[x, y - 1] += state[x, y - 1] == 1
                state[x + 1, y] += state[x + 1, y] == 1
                state[x, y + 1] += state[x, y + 1] == 1
                diffusions += 1
                per_y[y] += 1
                if f > max_moved:
                    max_moved = f
            else:
                state[x, y] = 1
    return diffusions, tests, max_moved


def initial_fluid(problem: GridProblem) -> FluidState:
    """``H = 0`` and ``F = b``: a quarter of the Fixed neighbors' temperatures."""
    fixed_vals = np.where(problem.fixed, problem.values, 0.0)
    F = np.zeros(problem.shape)
    # same summation order as the stencil
    F[1:-1, 1:-1] = 0.25 * (
        fixed_vals[:-2, 1:-1] + fixed_vals[1:-1, :-2] + fixed_vals[2:, 1:-1] + fixed_vals[1:-1, 2:]
    )
    F[problem.fixed] = 0.0
    return FluidState(F, np.zeros(problem.shape))


def diffuse(state: FluidState, cell: tuple[int, int], problem: GridProblem) -> float:
    """Diffuse one Free cell; returns the fluid absorbed by Fixed neighbors."""
    x, y = cell
    if problem.fixed[x, y]:
        raise ValueError(f"cell {cell} is Fixed")
    f = state.F[x, y]
    state.H[x, y] += f
    state.F[x, y] = 0.0
    r = 0.25 * f
    absorbed = 0.0
    for dx, dy in NEIGHBOR_OFFSETS:
        state.F[x + dx, y + dy] += r
        if problem.fixed[x + dx, y + dy]:
            absorbed += r
    return absorbed


def di_cycle(
    state: FluidState,
    gate: CellGate,
    problem: GridProblem,
    config: SolveConfig,
    per_y: np.ndarray | None = None,
) -> CycleStats:
    """One sweep in x-outer, y-inner order; diffuse every cell passing DC."""
    if per_y is None:
        per_y = np.zeros(problem.ny, dtype=np.int64)
    thr = config.threshold
    if gate.mode is OpenMode.NONE:
        out = _cycle_plain(state.F, state.H, problem.fixed, thr, per_y)
    elif gate.mode is OpenMode.TWO:
        out = _cycle_two(state.F, state.H, problem.fixed, gate.state, thr, per_y)
    else:
        out = _cycle_tri(state.F, state.H, gate.state, thr, per_y)
    return CycleStats(int(out[0]), int(out[1]), float(out[2]))


def di_solve(problem: GridProblem, config: SolveConfig, callback=None) -> SolveReport:
    """Run cycles until the stop rule fires or ``max_cycles`` is reached.

    ``callback(cycle, state, stats)`` is called after every cycle if given.
    """
    start = time.perf_counter()
    state = initial_fluid(problem)
    gate = CellGate.for_problem(problem, config.open_mode)
    per_y = np.zeros(problem.ny, dtype=np.int64)
    cycles = ops = tests = 0
    tests_per_cycle = []
    converged = False
    while cycles < config.max_cycles:
        stats = di_cycle(state, gate, problem, config, per_y)
        cycles += 1
        ops += stats.diffusions
        tests += stats.dc_tests
        tests_per_cycle.append(stats.dc_tests)
        if callback is not None:
            callback(cycles, state, stats)
        if config.stop_rule is StopRule.MOVED:
            done = stats.max_moved < config.epsilon
        else:
            done = stats.diffusions == 0
        if done:
            converged = True
            break
    wall = time.perf_counter() - start
    return SolveReport(
        method="di",
        cycles=cycles,
        op_count=ops,
        dc_tests=tests,
        per_y_ops=per_y,
        final_field=history_field(state, problem),
        wall_time=wall,
        converged=converged,
        dc_tests_per_cycle=tests_per_cycle,
    )


def history_field(state: FluidState, problem: GridProblem) -> np.ndarray:
    """H on Free cells, imposed temperatures on Fixed cells."""
    return np.where(problem.fixed, problem.values, state.H)


def fluid_residual(state: FluidState, system: LinearSystemView) -> float:
    """max over Free cells of ``|F - (b + A H - H)|``."""
    h = system.from_grid(state.H)
    f = system.from_grid(state.F)
    return float(np.max(np.abs(f - (system.rhs + system.matvec(h) - h)), initial=0.0))
