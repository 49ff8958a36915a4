import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from diteration import DirichletSpec, GridSpec, build_problem, make_problem

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def small_problems(draw, max_side=10, nonnegative=True, max_pins=3):
    nx = draw(st.integers(3, max_side))
    ny = draw(st.integers(3, max_side))
    lo = 0.0 if nonnegative else -100.0
    temp = st.floats(lo, 100.0, allow_nan=False).map(lambda v: round(v, 3))
    edges = [draw(temp) for _ in range(4)]
    interior = [(x, y) for x in range(1, nx - 1) for y in range(1, ny - 1)]
    k = draw(st.integers(0, min(max_pins, len(interior) - 1)))
    cells = draw(st.permutations(interior))[:k]
    pins = tuple((x, y, draw(temp)) for x, y in cells)
    return build_problem(GridSpec(nx, ny), DirichletSpec(*edges, pinned=pins))


@pytest.fixture
def paper_small():
    return make_problem(12, 9)


def seeded_pins(nx, ny, count, seed, high=100.0):
    rng = np.random.default_rng(seed)
    flat = rng.choice((nx - 2) * (ny - 2), size=count, replace=False)
    return tuple(
        (int(k // (ny - 2)) + 1, int(k % (ny - 2)) + 1, float(rng.uniform(0, high))) for k in flat
    )


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance check, then assert it."""

    failed = []

    def record(label, ok, detail="", defer=False):
        line = f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        if not ok:
            failed.append(line)
        if not defer and failed:
            msg = "\n".join(failed)
            failed.clear()
            raise AssertionError(msg)

    record.failed = failed
    yield record
    # deferred lines still fail the test
    assert not failed, "\n".join(failed)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
