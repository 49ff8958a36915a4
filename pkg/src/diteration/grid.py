"""Rectangular Dirichlet grids for the 2D stationary heat equation.

A grid of ``nx * ny`` points is indexed ``0..nx-1`` by ``0..ny-1``. Points on
the frontier (index 0 or the last index along either axis) and any pinned
interior points hold an imposed temperature ("Fixed"); everything else is an
unknown ("Free") that satisfies the 5-point average

    T(x, y) = 0.25 * (T(x-1, y) + T(x, y-1) + T(x+1, y) + T(x, y+1)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

WEIGHT = 0.25

# (dx, dy) in the order the stencil reads them
NEIGHBOR_OFFSETS = ((-1, 0), (0, -1), (1, 0), (0, 1))


class ProblemError(ValueError):
    """Raised for malformed grid or boundary descriptions."""


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 3 or self.ny < 3:
            raise ProblemError(
                f"grid {self.nx}x{self.ny} has no interior; need nx >= 3 and ny >= 3"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def n_interior(self) -> int:
        return (self.nx - 2) * (self.ny - 2)


@dataclass(frozen=True)
class DirichletSpec:
    """Edge temperatures plus optional pinned interior cells.

    ``pinned`` holds ``(x, y, temperature)`` triples.
    """

    edge_x0: float = 0.0
    edge_x1: float = 0.0
    edge_y0: float = 100.0
    edge_y1: float = 0.0
    pinned: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "pinned", tuple((int(x), int(y), float(v)) for x, y, v in self.pinned)
        )

    @classmethod
    def uniform(cls, value: float, pinned=()) -> "DirichletSpec":
        return cls(value, value, value, value, tuple(pinned))

    @property
    def values(self) -> list[float]:
        return [self.edge_x0, self.edge_x1, self.edge_y0, self.edge_y1] + [
            v for _, _, v in self.pinned
        ]


# The worked example: 100 degrees on the y=0 edge, 0 elsewhere.
PAPER_EDGES = DirichletSpec(edge_x0=0.0, edge_x1=0.0, edge_y0=100.0, edge_y1=0.0)


@dataclass(frozen=True, eq=False)
class GridProblem:
    """Immutable problem description.

    ``fixed`` is a boolean ``(nx, ny)`` mask of Fixed cells; ``values`` holds
    the imposed temperature at Fixed cells and 0 at Free cells.
    """

    grid: GridSpec
    dirichlet: DirichletSpec
    fixed: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.grid.shape

    @property
    def nx(self) -> int:
        return self.grid.nx

    @property
    def ny(self) -> int:
        return self.grid.ny

    @property
    def n_free(self) -> int:
        return int(self.fixed.size - np.count_nonzero(self.fixed))

    @property
    def free(self) -> np.ndarray:
        return ~self.fixed

    def is_fixed(self, x: int, y: int) -> bool:
        return bool(self.fixed[x, y])

    def free_cells(self) -> np.ndarray:
        """Free cell coordinates in sweep order (x outer, y inner), shape (n, 2)."""
        return np.argwhere(~self.fixed)

    def free_per_y(self) -> np.ndarray:
        return np.count_nonzero(~self.fixed, axis=0)

    def boundary_extremes(self) -> tuple[float, float]:
        """Min and max over the Fixed cells the stencil can actually read."""
        read = np.zeros_like(self.fixed)
        free = ~self.fixed
        read[:-1, :] |= free[1:, :]
        read[1:, :] |= free[:-1, :]
        read[:, :-1] |= free[:, 1:]
        read[:, 1:] |= free[:, :-1]
        vals = self.values[read & self.fixed]
        return float(vals.min()), float(vals.max())


def build_problem(grid: GridSpec, dirichlet: DirichletSpec) -> GridProblem:
    nx, ny = grid.nx, grid.ny
    fixed = np.zeros((nx, ny), dtype=np.bool_)
    values = np.zeros((nx, ny), dtype=np.float64)

    fixed[:, 0] = fixed[:, -1] = True
    fixed[0, :] = fixed[-1, :] = True
    values[:, 0] = dirichlet.edge_y0
    values[:, -1] = dirichlet.edge_y1
    # x-edges written last so they own the corners
    values[0, :] = dirichlet.edge_x0
    values[-1, :] = dirichlet.edge_x1

    seen = set()
    for x, y, v in dirichlet.pinned:
        if not (1 <= x <= nx - 2 and 1 <= y <= ny - 2):
            raise ProblemError(f"pinned cell ({x}, {y}) is not strictly interior")
        if (x, y) in seen:
            raise ProblemError(f"duplicate pinned cell ({x}, {y})")
        seen.add((x, y))
        fixed[x, y] = True
        values[x, y] = v

    fixed.setflags(write=False)
    values.setflags(write=False)
    return GridProblem(grid, dirichlet, fixed, values)


def make_problem(nx: int, ny: int, dirichlet: DirichletSpec = PAPER_EDGES) -> GridProblem:
    return build_problem(GridSpec(nx, ny), dirichlet)


def random_holes(
    grid: GridSpec,
    count: int,
    seed: int,
    low: float = 0.0,
    high: float = 1000.0,
) -> tuple[tuple[int, int, float], ...]:
    """Draw ``count`` distinct interior cells with temperatures uniform in [low, high]."""
    if count < 0:
        raise ProblemError("hole count must be nonnegative")
    if count > grid.n_interior:
        raise ProblemError(f"cannot place {count} holes in {grid.n_interior} interior cells")
    rng = np.random.default_rng(seed)
    flat = rng.choice(grid.n_interior, size=count, replace=False)
    temps = rng.uniform(low, high, size=count)
    iy = grid.ny - 2
    return tuple(
        (int(k // iy) + 1, int(k % iy) + 1, float(t)) for k, t in zip(flat, temps)
    )


@dataclass(frozen=True, eq=False)
class LinearSystemView:
    """The problem as ``x = A x + b`` over Free cells.

    Rows are stored CSR-style: the Free neighbors of unknown ``i`` are
    ``indices[indptr[i]:indptr[i+1]]``, each with weight 0.25.
    """

    cells: np.ndarray  # (n, 2) coordinates, sweep order
    index: np.ndarray  # (nx, ny) unknown index, -1 at Fixed cells
    indptr: np.ndarray
    indices: np.ndarray
    rhs: np.ndarray
    n_fixed_neighbors: np.ndarray

    @property
    def n_unknowns(self) -> int:
        return len(self.rhs)

    def row_entries(self, i: int) -> list[tuple[int, float]]:
        return [(int(j), WEIGHT) for j in self.indices[self.indptr[i] : self.indptr[i + 1]]]

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Return ``A @ x``."""
        rows = np.repeat(np.arange(self.n_unknowns), np.diff(self.indptr))
        out = np.zeros(self.n_unknowns)
        np.add.at(out, rows, x[self.indices])
        return WEIGHT * out

    def to_grid(self, x: np.ndarray, problem: GridProblem) -> np.ndarray:
        """Embed a vector of unknowns into a full field with Fixed values."""
        field = np.array(problem.values, dtype=np.float64)
        field[self.cells[:, 0], self.cells[:, 1]] = x
        return field

    def from_grid(self, field: np.ndarray) -> np.ndarray:
        return np.asarray(field)[self.cells[:, 0], self.cells[:, 1]]


def as_linear_system(problem: GridProblem) -> LinearSystemView:
    cells = problem.free_cells()
    n = len(cells)
    index = np.full(problem.shape, -1, dtype=np.int64)
    index[cells[:, 0], cells[:, 1]] = np.arange(n)

    nbr = np.stack(
        [index[cells[:, 0] + dx, cells[:, 1] + dy] for dx, dy in NEIGHBOR_OFFSETS], axis=1
    )
    fixed_vals = np.stack(
        [problem.values[cells[:, 0] + dx, cells[:, 1] + dy] for dx, dy in NEIGHBOR_OFFSETS],
        axis=1,
    )
    is_free = nbr >= 0
    counts = is_free.sum(axis=1)
    indptr = np.concatenate([[0], np.cumsum(counts)])
    indices = nbr[is_free]  # row-major, so rows stay contiguous
    contrib = np.where(is_free, 0.0, fixed_vals)
    # left-to-right, matching the stencil's summation order
    rhs = WEIGHT * (((contrib[:, 0] + contrib[:, 1]) + contrib[:, 2]) + contrib[:, 3])
    return LinearSystemView(cells, index, indptr, indices, rhs, 4 - counts)


def exact_solution_1cell(problem: GridProblem) -> float:
    if problem.n_free != 1:
        raise ProblemError(f"expected exactly one Free cell, got {problem.n_free}")
    (x, y), = problem.free_cells()
    return 0.25 * sum(float(problem.values[x + dx, y + dy]) for dx, dy in NEIGHBOR_OFFSETS)


def parse_problem_text(text: str) -> GridProblem:
    """Parse the ``key=value`` / ``pin x y value`` problem format."""
    keys = {}
    pins = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("pin"):
                _, x, y, v = line.split()
                pins.append((int(x), int(y), float(v)))
            else:
                k, v = (s.strip() for s in line.split("=", 1))
                keys[k] = v
        except ValueError as exc:
            raise ProblemError(f"line {lineno}: cannot parse {raw!r}") from exc

    unknown = set(keys) - {"nx", "ny", "edge_x0", "edge_x1", "edge_y0", "edge_y1"}
    if unknown:
        raise ProblemError(f"unknown keys: {sorted(unknown)}")
    if "nx" not in keys or "ny" not in keys:
        raise ProblemError("problem file must set nx and ny")
    try:
        grid = GridSpec(int(keys["nx"]), int(keys["ny"]))
        edges = {k: float(keys[k]) for k in keys if k.startswith("edge_")}
    except ValueError as exc:
        raise ProblemError(str(exc)) from exc
    return build_problem(grid, DirichletSpec(**{**_edge_defaults(), **edges}, pinned=pins))


def _edge_defaults():
    return dict(edge_x0=0.0, edge_x1=0.0, edge_y0=100.0, edge_y1=0.0)


def format_problem_text(problem: GridProblem) -> str:
    d = problem.dirichlet
    lines = [
        f"nx={problem.nx}",
        f"ny={problem.ny}",
        f"edge_x0={d.edge_x0!r}",
        f"edge_x1={d.edge_x1!r}",
        f"edge_y0={d.edge_y0!r}",
        f"edge_y1={d.edge_y1!r}",
    ]
    lines += [f"pin {x} {y} {v!r}" for x, y, v in d.pinned]
    return "\n".join(lines) + "\n"


def load_problem(path) -> GridProblem:
    return parse_problem_text(Path(path).read_text())
