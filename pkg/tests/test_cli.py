import csv
import io

import numpy as np
import pytest

from diteration.cli import main
from diteration.experiments import (
    PROFILE_HEADER,
    REPORT_HEADER,
    ExperimentConfig,
    run_experiment,
    run_holes,
    run_ny_table,
    run_profile,
    run_table1,
)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def strip_wall(text):
    lines = text.splitlines()
    col = lines[0].split(",").index("wall_seconds")
    return [",".join(v for i, v in enumerate(l.split(",")) if i != col) for l in lines]


def test_solve_single_cell(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["--nx", "3", "--ny", "3", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.splitlines()[0] == ",".join(REPORT_HEADER)
    (row,) = read_csv(text)
    assert (row["method"], row["ops"], row["converged"]) == ("di", "1", "true")


def test_stdout_when_no_out(capsys):
    assert main(["--nx", "3", "--ny", "3", "--method", "gs"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert rows[0]["method"] == "gs" and rows[0]["ops"] == "2"


@pytest.mark.parametrize(
    "argv",
    [
        ["--delta", "0"],
        ["--delta", "0.5"],
        ["--epsilon", "-1"],
        ["--nx", "2", "--ny", "5"],
        ["--holes", "3"],
        ["--max-cycles", "0"],
        ["--problem", "/nonexistent/problem.txt"],
    ],
)
def test_invalid_values_exit_1(argv, capsys):
    assert main(argv + ["--desk"]) == 1
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["--open-mode", "four"], ["--no-such-flag"]])
def test_unparseable_flags_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1
    assert "error" in capsys.readouterr().err


def test_nonconvergence_exit_2(capsys):
    assert main(["--desk", "--max-cycles", "3"]) == 2
    assert read_csv(capsys.readouterr().out)[0]["converged"] == "false"


def test_unwritable_out(capsys):
    assert main(["--nx", "3", "--ny", "3", "--out", "/nonexistent/dir/x.csv"]) == 1


def test_problem_file(tmp_path, capsys):
    f = tmp_path / "p.txt"
    f.write_text("nx=6\nny=5\nedge_y0=100\npin 2 2 50\n")
    assert main(["--problem", str(f), "--method", "gs", "--epsilon", "1e-6"]) == 0
    row = read_csv(capsys.readouterr().out)[0]
    assert (row["nx"], row["ny"]) == ("6", "5")
    assert int(row["ops"]) % (4 * 3 - 1) == 0


def test_profile_file_rows(tmp_path):
    prof = tmp_path / "prof.csv"
    assert main(["--desk", "--profile-out", str(prof)]) == 0
    lines = prof.read_text().splitlines()
    assert lines[0] == ",".join(PROFILE_HEADER)
    assert len(lines) - 1 == 98


def test_deterministic_replay(tmp_path):
    args = ["--experiment", "holes", "--desk", "--holes", "5", "--seed", "11"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b)])
    assert strip_wall(a.read_text()) == strip_wall(b.read_text())


def test_table1_rows_desk():
    res = run_table1(ExperimentConfig(experiment="table1", desk=True))
    assert [float(r["delta"]) for r in res.rows] == [1, 2, 3, 4, 5, 6, 7, 8, 16]
    ops = [r["ops"] for r in res.rows]
    assert ops[1:] == sorted(ops[1:])


@pytest.mark.parametrize("table,mode", [("table2", "none"), ("table3", "two"), ("table4", "tri")])
def test_ny_tables_desk(table, mode):
    res = run_ny_table(ExperimentConfig(experiment=table, desk=True), table)
    n_ny = {"table2": 5, "table3": 7, "table4": 6}[table]
    assert len(res.rows) == 2 * n_ny
    assert [r["method"] for r in res.rows] == ["gs", "di"] * n_ny
    assert {r["open_mode"] for r in res.rows if r["method"] == "di"} == {mode}


def test_profile_gs_column():
    res = run_profile(ExperimentConfig(experiment="profile", desk=True, compare_gs=True))
    gs_cycles = res.reports[1].cycles
    assert all(r["collections"] == gs_cycles * 98 for r in res.rows)
    assert len(res.rows) == 98


def test_zero_holes_equals_plain_problem():
    a = run_holes(ExperimentConfig(experiment="holes", desk=True, holes=0, seed=5))
    b = run_ny_table(ExperimentConfig(experiment="table2", desk=True), "table2", ny_values=(100,))
    strip = lambda rows: [{k: v for k, v in r.items() if k not in ("wall_seconds", "experiment")} for r in rows]
    assert strip(a.rows) == strip(b.rows)


def test_holes_with_inverted_boundary():
    cfg = ExperimentConfig(
        experiment="holes", desk=True, holes=10, seed=2, hole_min=0, hole_max=0,
        edge_x0=100, edge_x1=100, edge_y0=100, edge_y1=100,
    )
    res = run_holes(cfg)
    gs, di = res.reports
    assert di.op_count < gs.op_count
    assert np.all(di.final_field <= 100.0)


def test_run_experiment_dispatch():
    res = run_experiment(ExperimentConfig(experiment="solve", nx=5, ny=5, method="gs"))
    assert res.rows[0]["experiment"] == "solve" and res.converged


def test_costs_experiment_csv(tmp_path, monkeypatch):
    import diteration.experiments as ex

    monkeypatch.setattr(ex, "DESK_COST_SHAPES", ((30, 30),))
    out = tmp_path / "c.csv"
    assert main(["--experiment", "costs", "--desk", "--optimized", "--out", str(out)]) == 0
    rows = read_csv(out.read_text())
    assert [r["method"] for r in rows] == ["gs", "di"]
    assert all(float(r["alpha"]) > 0 for r in rows)
