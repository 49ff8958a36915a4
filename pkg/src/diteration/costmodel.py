"""Runtime decomposition ``RT = (alpha + beta) * (nx * ny) * nb_iter + c``.

``alpha`` is the cost of visiting one cell in a sweep without doing the
update, ``beta`` the extra cost of the update itself (a collection for
Gauss-Seidel, a diffusion for the D-iteration) and ``c`` the set-up time.
Both are measured with stripped-down copies of the solver loop nests.

The reference cost figures were taken from an unoptimized build. Running
this module under ``NUMBA_OPT=0`` gives the equivalent here;
:func:`measure_cost_table` does that in a subprocess when asked to.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import statistics
import subprocess
import sys
import time
from dataclasses import asdict, dataclass

import numba
import numpy as np
from numba import njit

from .grid import GridProblem, make_problem

log = logging.getLogger(__name__)

REPEATS = 5
METHODS = ("gs", "di")


@dataclass(frozen=True)
class CostEstimate:
    method: str
    nx: int
    ny: int
    nb_iter: int
    alpha: float
    beta: float
    c: float

    @property
    def alpha_beta(self) -> float:
        return self.alpha + self.beta


# Loop nests. cache=False so a NUMBA_OPT override applies on every run.


@njit(cache=False)
def _gs_visit(T, boundary, nb_iter):
    nx, ny = T.shape
    acc = 0.0
    for _ in range(nb_iter):
        for x in range(nx):
            for y in range(ny):
                if not boundary[x, y]:
                    acc += T[x, y]
    return acc


@njit(cache=False)
def _gs_collect(T, boundary, nb_iter):
    nx, ny = T.shape
    acc = 0.0
    for _ in range(nb_iter):
        for x in range(nx):
            for y in range(ny):
                if not boundary[x, y]:
                    T[x, y] = 0.25 * (T[x - 1, y] + T[x, y - 1] + T[x + 1, y] + T[x, y + 1])
                    acc += T[x, y]
    return acc


@njit(cache=False)
def _di_visit(T, F, boundary, opn, thr, nb_iter):
    nx, ny = T.shape
    acc = 0.0
    for _ in range(nb_iter):
        for x in range(nx):
            for y in range(ny):
                if not boundary[x, y] and opn[x, y]:
                    transit = F[x, y]
                    if transit > thr:
                        acc += T[x, y]
    return acc


@njit(cache=False)
def _di_diffuse(T, F, boundary, opn, thr, nb_iter):
    nx, ny = T.shape
    acc = 0.0
    for _ in range(nb_iter):
        for x in range(nx):
            for y in range(ny):
                if not boundary[x, y] and opn[x, y]:
                    f = F[x, y]
                    if f > thr:
                        T[x, y] += f
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
                        acc += T[x, y]
    return acc


def _timed(fn, *args) -> float:
    t0 = time.perf_counter()
    acc = fn(*args)
    elapsed = time.perf_counter() - t0
    log.debug("%s accumulator=%r", fn.__name__, acc)
    return elapsed


def _best_time(make_args, fn, repeats: int) -> float:
    # min, not median: interference from other load only ever adds time.
    # Fresh arrays per repeat since the update loops mutate their inputs.
    return min(_timed(fn, *make_args()) for _ in range(repeats))


def _check(method: str, nb_iter: int):
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if nb_iter < 10:
        raise ValueError(f"nb_iter must be >= 10, got {nb_iter}")


def _state(problem: GridProblem):
    from .diffusion import initial_fluid

    T = np.array(problem.values, dtype=np.float64)
    boundary = np.array(problem.fixed)
    return T, boundary, initial_fluid(problem).F


_warm = set()


def _warm_up():
    key = int(numba.core.config.OPT)
    if key in _warm:
        return
    p = make_problem(3, 3)
    T, b, F = _state(p)
    o = np.ones(p.shape, dtype=np.bool_)
    _gs_visit(T, b, 1)
    _gs_collect(T.copy(), b, 1)
    _di_visit(T, F, b, o, 0.0, 1)
    _di_diffuse(T.copy(), F.copy(), b, o.copy(), -1.0, 1)
    _warm.add(key)


def measure_alpha(method: str, problem: GridProblem, nb_iter: int, repeats: int = REPEATS) -> float:
    """Seconds per cell visit for the bare loop (no update)."""
    _check(method, nb_iter)
    _warm_up()
    T, boundary, _ = _state(problem)
    if method == "gs":
        elapsed = _best_time(lambda: (T, boundary, nb_iter), _gs_visit, repeats)
    else:
        # every visit passes DC and accumulates, as the Gauss-Seidel loop does
        F = np.ones(problem.shape)
        opn = np.ones(problem.shape, dtype=np.bool_)
        elapsed = _best_time(lambda: (T, F, boundary, opn, 0.0, nb_iter), _di_visit, repeats)
    return elapsed / (nb_iter * problem.nx * problem.ny)


def measure_alpha_beta(
    method: str, problem: GridProblem, nb_iter: int, repeats: int = REPEATS
) -> float:
    """Seconds per cell visit with the update performed on every visit."""
    _check(method, nb_iter)
    _warm_up()
    T, boundary, F = _state(problem)
    if method == "gs":
        elapsed = _best_time(lambda: (T.copy(), boundary, nb_iter), _gs_collect, repeats)
    else:
        # threshold below any fluid value forces a diffusion on every visit
        elapsed = _best_time(
            lambda: (T.copy(), F.copy(), boundary, np.ones(problem.shape, np.bool_), -1.0, nb_iter),
            _di_diffuse,
            repeats,
        )
    return elapsed / (nb_iter * problem.nx * problem.ny)


def estimate_c(problem: GridProblem, method: str = "gs", repeats: int = REPEATS) -> float:
    """Median time to allocate and initialize solver state."""
    from .config import OpenMode
    from .diffusion import CellGate, initial_fluid
    from .gauss_seidel import initial_field

    def init():
        if method == "gs":
            return initial_field(problem)
        return initial_fluid(problem), CellGate.for_problem(problem, OpenMode.TRI)

    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        init()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def estimate_costs(method: str, problem: GridProblem, nb_iter: int, repeats: int = REPEATS) -> CostEstimate:
    alpha = measure_alpha(method, problem, nb_iter, repeats)
    alpha_beta = measure_alpha_beta(method, problem, nb_iter, repeats)
    return CostEstimate(
        method=method,
        nx=problem.nx,
        ny=problem.ny,
        nb_iter=nb_iter,
        alpha=alpha,
        beta=max(alpha_beta - alpha, 0.0),
        c=estimate_c(problem, method, repeats),
    )


def predict_runtime(est: CostEstimate, problem: GridProblem, nb_iter: int) -> float:
    return (est.alpha + est.beta) * (problem.nx * problem.ny) * nb_iter + est.c


def iterations_for(nx: int, ny: int, target_visits: float) -> int:
    return max(10, int(round(target_visits / (nx * ny))))


def _measure_local(shapes, methods, target_visits, repeats):
    # Repeats run round-robin over every (shape, method) so a slow spell on
    # the machine lands on one sample of many shapes, not all samples of one.
    jobs = []
    for nx, ny in shapes:
        problem = make_problem(nx, ny)
        nb_iter = iterations_for(nx, ny, target_visits)
        jobs += [(method, problem, nb_iter) for method in methods]
    alpha = [float("inf")] * len(jobs)
    alpha_beta = [float("inf")] * len(jobs)
    for _ in range(repeats):
        for k, (method, problem, nb_iter) in enumerate(jobs):
            alpha[k] = min(alpha[k], measure_alpha(method, problem, nb_iter, repeats=1))
            alpha_beta[k] = min(alpha_beta[k], measure_alpha_beta(method, problem, nb_iter, repeats=1))
    return [
        CostEstimate(
            method=method,
            nx=problem.nx,
            ny=problem.ny,
            nb_iter=nb_iter,
            alpha=a,
            beta=max(ab - a, 0.0),
            c=estimate_c(problem, method, repeats),
        )
        for (method, problem, nb_iter), a, ab in zip(jobs, alpha, alpha_beta)
    ]


def measure_cost_table(
    shapes,
    methods=METHODS,
    target_visits: float = 1e7,
    repeats: int = REPEATS,
    unoptimized: bool = True,
) -> list[CostEstimate]:
    """CostEstimate per (shape, method).

    With ``unoptimized``, the loops are compiled at ``NUMBA_OPT=0`` in a
    child process unless this process already runs at that level.
    """
    shapes = [tuple(int(v) for v in s) for s in shapes]
    if not unoptimized or int(numba.core.config.OPT) == 0:
        return _measure_local(shapes, methods, target_visits, repeats)

    cmd = [
        sys.executable, "-m", "diteration.costmodel",
        "--shapes", ",".join(f"{nx}x{ny}" for nx, ny in shapes),
        "--methods", ",".join(methods),
        "--target-visits", repr(float(target_visits)),
        "--repeats", str(repeats),
    ]
    env = dict(os.environ, NUMBA_OPT="0")
    res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return [CostEstimate(**row) for row in json.loads(res.stdout)]


def parse_shapes(text: str) -> list[tuple[int, int]]:
    return [tuple(int(v) for v in s.lower().split("x")) for s in text.split(",") if s]


def main(argv=None):
    ap = argparse.ArgumentParser(description="Measure loop costs; prints JSON rows.")
    ap.add_argument("--shapes", type=parse_shapes, default=parse_shapes("100x100,1000x1000"))
    ap.add_argument("--methods", default="gs,di")
    ap.add_argument("--target-visits", type=float, default=1e7)
    ap.add_argument("--repeats", type=int, default=REPEATS)
    args = ap.parse_args(argv)
    rows = _measure_local(args.shapes, args.methods.split(","), args.target_visits, args.repeats)
    json.dump([asdict(r) for r in rows], sys.stdout)
    print()


if __name__ == "__main__":
    main()
