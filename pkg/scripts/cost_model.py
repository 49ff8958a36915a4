"""Fit RT = (alpha + beta) * nx * ny * nb_iter + c and compare with real solves.

The model assumes every cell costs the same on every cycle. The D-iteration
with an open gate breaks that: closed cells are skipped almost for free, so
its measured time falls well below the prediction. The per-cycle DC test
counts printed at the end show how much of the grid stays open.

    python scripts/cost_model.py [--nx 1000 --ny 1000] [--unoptimized]
"""

import argparse

from diteration import OpenMode, SolveConfig, di_solve, gs_solve, make_problem
from diteration.costmodel import measure_cost_table, predict_runtime


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nx", type=int, default=1000)
    ap.add_argument("--ny", type=int, default=1000)
    ap.add_argument("--unoptimized", action="store_true",
                    help="measure loops at NUMBA_OPT=0 (solves still run optimized)")
    args = ap.parse_args()

    p = make_problem(args.nx, args.ny)
    gs_solve(make_problem(5, 5), SolveConfig())
    di_solve(make_problem(5, 5), SolveConfig(open_mode=OpenMode.TRI))
    runs = {
        "gs": gs_solve(p, SolveConfig(epsilon=0.1)),
        "di": di_solve(p, SolveConfig(epsilon=0.1, delta=4, open_mode=OpenMode.TRI)),
    }
    ests = measure_cost_table([(args.nx, args.ny)], unoptimized=args.unoptimized)

    print(f"{'method':6s} {'alpha':>9s} {'beta':>9s} {'c':>9s} {'cycles':>6s} "
          f"{'predicted':>9s} {'measured':>9s}")
    for e in ests:
        r = runs[e.method]
        pred = predict_runtime(e, p, r.cycles)
        print(f"{e.method:6s} {e.alpha:9.2e} {e.beta:9.2e} {e.c:9.2e} {r.cycles:6d} "
              f"{pred:9.3f} {r.wall_time:9.3f}")

    tests = runs["di"].dc_tests_per_cycle
    print(f"\nDI DC tests per cycle (of {p.n_free} Free cells): first {tests[0]}, "
          f"median {sorted(tests)[len(tests) // 2]}, last {tests[-1]}")


if __name__ == "__main__":
    main()
