"""Dense direct solve of small grid problems, used as ground truth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import WEIGHT, GridProblem, LinearSystemView, as_linear_system

MAX_DENSE_UNKNOWNS = 4096


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class DenseSystem:
    matrix: np.ndarray  # I - A
    rhs: np.ndarray
    cells: np.ndarray  # Free-cell ordering, (n, 2)


def dense_system(system: LinearSystemView | GridProblem) -> DenseSystem:
    if isinstance(system, GridProblem):
        system = as_linear_system(system)
    n = system.n_unknowns
    if n > MAX_DENSE_UNKNOWNS:
        raise OracleError(f"{n} unknowns exceeds the dense limit of {MAX_DENSE_UNKNOWNS}")
    m = np.eye(n)
    rows = np.repeat(np.arange(n), np.diff(system.indptr))
    m[rows, system.indices] = -WEIGHT
    return DenseSystem(m, system.rhs.copy(), system.cells)


def dense_solve(system: DenseSystem) -> np.ndarray:
    """Gaussian elimination with partial pivoting."""
    a = np.array(system.matrix, dtype=np.float64)
    b = np.array(system.rhs, dtype=np.float64)
    n = len(b)
    if a.shape != (n, n):
        raise OracleError(f"matrix shape {a.shape} does not match rhs length {n}")
    if n > MAX_DENSE_UNKNOWNS:
        raise OracleError(f"{n} unknowns exceeds the dense limit of {MAX_DENSE_UNKNOWNS}")
    scale = np.abs(a).max(initial=0.0)

    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= 1e-14 * scale:
            raise OracleError(f"matrix is singular at column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
        factors = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= np.outer(factors, a[k, k:])
        b[k + 1 :] -= factors * b[k]

    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x


def solve_problem(problem: GridProblem) -> np.ndarray:
    """Full ``(nx, ny)`` field of the exact discrete solution."""
    view = as_linear_system(problem)
    x = dense_solve(dense_system(view))
    return view.to_grid(x, problem)


def compare_fields(a: np.ndarray, b: np.ndarray, problem: GridProblem | None = None):
    """Max-abs and RMS differences over Free cells.

    Without a problem, every cell is compared.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"field shapes differ: {a.shape} vs {b.shape}")
    if problem is not None:
        if problem.shape != a.shape:
            raise ValueError(f"field shape {a.shape} does not match grid {problem.shape}")
        d = (a - b)[~problem.fixed]
    else:
        d = (a - b).ravel()
    if d.size == 0:
        return 0.0, 0.0
    return float(np.abs(d).max()), float(np.sqrt(np.mean(d * d)))
