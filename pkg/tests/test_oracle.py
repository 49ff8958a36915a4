import numpy as np
import pytest
from hypothesis import given

from diteration import DirichletSpec, GridSpec, as_linear_system, build_problem, make_problem
from diteration.oracle import (
    DenseSystem,
    OracleError,
    compare_fields,
    dense_solve,
    dense_system,
    solve_problem,
)

from conftest import small_problems


def test_single_unknown():
    x = dense_solve(DenseSystem(np.array([[1.0]]), np.array([25.0]), np.array([[1, 1]])))
    assert x.tolist() == [25.0]


def test_four_by_four_hand_elimination():
    # symmetry: y=1 cells equal a, y=2 cells equal c; c = a/3, a = 25 + a/3
    field = solve_problem(make_problem(4, 4))
    assert field[1, 1] == pytest.approx(37.5, abs=1e-12)
    assert field[2, 1] == pytest.approx(37.5, abs=1e-12)
    assert field[1, 2] == pytest.approx(12.5, abs=1e-12)
    assert field[2, 2] == pytest.approx(12.5, abs=1e-12)


def test_dense_matrix_structure():
    ds = dense_system(make_problem(7, 6))
    m = ds.matrix
    assert np.all(np.diag(m) == 1.0)
    off = m - np.diag(np.diag(m))
    assert set(np.unique(off)) <= {0.0, -0.25}
    assert np.all(np.count_nonzero(off, axis=1) <= 4)


def test_needs_pivoting():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    x = dense_solve(DenseSystem(a, np.array([2.0, 3.0]), np.zeros((2, 2), int)))
    assert x.tolist() == [3.0, 2.0]


def test_singular_reported():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(OracleError, match="singular"):
        dense_solve(DenseSystem(a, np.ones(2), np.zeros((2, 2), int)))


def test_size_guard():
    with pytest.raises(OracleError):
        dense_system(make_problem(70, 70))


def test_matches_numpy_solve():
    p = build_problem(GridSpec(12, 10), DirichletSpec(5, 10, 100, 0, pinned=[(4, 4, 60.0)]))
    ds = dense_system(p)
    assert np.allclose(dense_solve(ds), np.linalg.solve(ds.matrix, ds.rhs), atol=1e-11, rtol=0)


@given(small_problems(nonnegative=False))
def test_residual_and_maximum_principle(p):
    view = as_linear_system(p)
    x = dense_solve(dense_system(view))
    bmax = np.abs(view.rhs).max(initial=0.0)
    assert np.abs(x - view.matvec(x) - view.rhs).max() <= 1e-10 * (1 + bmax)
    lo, hi = p.boundary_extremes()
    assert np.all(x >= lo - 1e-9) and np.all(x <= hi + 1e-9)


def test_constant_boundary():
    p = build_problem(GridSpec(9, 8), DirichletSpec.uniform(42.0, [(3, 3, 42.0)]))
    assert np.allclose(solve_problem(p)[~p.fixed], 42.0, atol=1e-12, rtol=0)


def test_compare_identical():
    f = solve_problem(make_problem(5, 5))
    assert compare_fields(f, f, make_problem(5, 5)) == (0.0, 0.0)


def test_compare_one_cell_off():
    p = make_problem(5, 5)  # 9 Free cells
    a = np.zeros(p.shape)
    b = a.copy()
    b[2, 3] = 0.5
    mx, rms = compare_fields(a, b, p)
    assert mx == 0.5
    assert rms == pytest.approx(0.5 / 3, rel=1e-15)


def test_compare_ignores_fixed_cells():
    p = make_problem(5, 5)
    a = np.zeros(p.shape)
    b = a.copy()
    b[0, :] = 99
    assert compare_fields(a, b, p) == (0.0, 0.0)


def test_compare_shape_mismatch():
    with pytest.raises(ValueError):
        compare_fields(np.zeros((3, 3)), np.zeros((3, 4)))
