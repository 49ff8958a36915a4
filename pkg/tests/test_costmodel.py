import statistics

import pytest

from diteration import SolveConfig, gs_solve, make_problem
from diteration.costmodel import (
    CostEstimate,
    estimate_c,
    estimate_costs,
    iterations_for,
    measure_alpha,
    measure_alpha_beta,
    measure_cost_table,
    parse_shapes,
    predict_runtime,
)


def est(alpha=2.0e-8, beta=4.2e-8, c=0.0):
    return CostEstimate("gs", 1000, 1000, 236, alpha, beta, c)


def test_predict_runtime_arithmetic():
    # (2.0e-8 + 4.2e-8) * 1e6 * 236
    assert predict_runtime(est(), make_problem(1000, 1000), 236) == pytest.approx(14.632)


def test_predict_zero_iterations_is_c():
    assert predict_runtime(est(c=0.25), make_problem(50, 50), 0) == 0.25


def test_predict_linear_in_cells_and_iterations():
    e = est(c=1.0)
    base = predict_runtime(e, make_problem(100, 100), 10) - 1.0
    assert predict_runtime(e, make_problem(200, 100), 10) - 1.0 == pytest.approx(2 * base)
    assert predict_runtime(e, make_problem(100, 100), 30) - 1.0 == pytest.approx(3 * base)


@pytest.mark.parametrize("fn", [measure_alpha, measure_alpha_beta])
def test_nb_iter_guard(fn):
    with pytest.raises(ValueError):
        fn("gs", make_problem(10, 10), 9)
    with pytest.raises(ValueError):
        fn("jacobi", make_problem(10, 10), 10)


def test_measurements_positive():
    p = make_problem(60, 60)
    for method in ("gs", "di"):
        e = estimate_costs(method, p, 20, repeats=2)
        assert e.alpha > 0 and e.beta >= 0 and e.c >= 0


def test_c_small_grid_bound():
    assert 0 <= estimate_c(make_problem(3, 3)) <= 1e-3


def test_c_repeatable():
    p = make_problem(1000, 1000)
    runs = [estimate_c(p, "di") for _ in range(5)]
    assert statistics.pstdev(runs) / statistics.mean(runs) < 0.5


def test_iterations_for():
    assert iterations_for(1000, 1000, 1e7) == 10
    assert iterations_for(5000, 200, 1e6) == 10
    assert iterations_for(100, 100, 1e7) == 1000


def test_parse_shapes():
    assert parse_shapes("100x100,5000X200") == [(100, 100), (5000, 200)]


def test_unoptimized_table_via_subprocess():
    rows = measure_cost_table([(40, 30)], methods=("gs",), target_visits=1e5, repeats=1)
    assert len(rows) == 1
    r = rows[0]
    assert (r.method, r.nx, r.ny, r.nb_iter) == ("gs", 40, 30, 83)
    assert r.alpha > 0


@pytest.mark.slow
def test_model_predicts_gs_solve():
    p = make_problem(1000, 1000)
    gs_solve(make_problem(5, 5), SolveConfig())  # compile outside the timed run
    report = gs_solve(p, SolveConfig(epsilon=0.1))
    e = estimate_costs("gs", p, 20)
    predicted = predict_runtime(e, p, report.cycles)
    assert 0.5 <= report.wall_time / predicted <= 2.0


@pytest.mark.slow
def test_c_negligible_vs_solve():
    p = make_problem(1000, 1000)
    report = gs_solve(p, SolveConfig(epsilon=0.1))
    assert estimate_c(p) < 0.05 * report.wall_time
