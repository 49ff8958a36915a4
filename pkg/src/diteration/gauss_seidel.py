"""In-place Gauss-Seidel ("collection") sweeps for the 5-point heat stencil."""

from __future__ import annotations

import time

import numpy as np
from numba import njit

from .config import SolveConfig, SolveReport
from .grid import GridProblem


@njit(cache=True)
def _gs_sweep(T, fixed):
    nx, ny = T.shape
    max_change = 0.0
    collections = 0
    for x in range(nx):
        for y in range(ny):
            if fixed[x, y]:
                continue
            new = 0.25 * (T[x - 1, y] + T[x, y - 1] + T[x + 1, y] + T[x, y + 1])
            d = abs(new - T[x, y])
            if d > max_change:
                max_change = d
            T[x, y] = new
            collections += 1
    return max_change, collections


def initial_field(problem: GridProblem) -> np.ndarray:
    """Fixed cells at their imposed value, Free cells at 0."""
    return np.array(problem.values, dtype=np.float64)


def gs_cycle(field: np.ndarray, problem: GridProblem) -> tuple[float, int]:
    """One sweep, x outer and y inner, updating ``field`` in place.

    Returns the largest absolute change and the number of collections.
    """
    max_change, collections = _gs_sweep(field, problem.fixed)
    return float(max_change), int(collections)


def gs_solve(problem: GridProblem, config: SolveConfig, callback=None) -> SolveReport:
    """Sweep until the max change over a cycle drops below ``config.epsilon``.

    ``callback(cycle, field)`` is called after every cycle if given.
    """
    start = time.perf_counter()
    field = initial_field(problem)
    cycles = ops = 0
    converged = False
    while cycles < config.max_cycles:
        max_change, n = gs_cycle(field, problem)
        cycles += 1
        ops += n
        if callback is not None:
            callback(cycles, field)
        if max_change < config.epsilon:
            converged = True
            break
    wall = time.perf_counter() - start
    return SolveReport(
        method="gs",
        cycles=cycles,
        op_count=ops,
        dc_tests=0,
        per_y_ops=cycles * problem.free_per_y().astype(np.int64),
        final_field=field,
        wall_time=wall,
        converged=converged,
    )
