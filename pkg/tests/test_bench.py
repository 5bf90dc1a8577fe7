"""Grid runner, performance profiles, CSV contracts, and the CLI."""

from __future__ import annotations

import math

import numpy as np
import pytest

from rose_lbfgs.bench import (
    CellOutcome,
    ExperimentGrid,
    Metric,
    MethodSpec,
    ProblemSpec,
    performance_profile,
    read_profile_csv,
    read_results_csv,
    run_grid,
    write_profile_csv,
    write_results_csv,
)
from rose_lbfgs.cli import main
from rose_lbfgs.driver import RoseConfig, SeedMode
from rose_lbfgs.operators import ScaledIdentity
from rose_lbfgs.problems import StructuredObjective, make_quadratic_benchmark


def _norm_squared_spec():
    zero = ScaledIdentity(0.0, 2)
    problem = StructuredObjective(
        dim=2,
        eval=lambda x: 0.5 * float(x @ x),
        grad=lambda x: np.asarray(x, dtype=float).copy(),
        regularizer_hessian=lambda x: zero,
    )
    return ProblemSpec(name="norm2", build=lambda: problem, x0=np.array([1.0, 1.0]))


def test_profile_hand_example():
    curves = performance_profile(np.array([[1.0, 2.0], [2.0, 2.0]]), ["a", "b"])
    assert curves[0].points == ((1.0, 1.0), (2.0, 1.0))
    assert curves[1].points == ((1.0, 0.5), (2.0, 1.0))


def test_profile_single_method_is_flat_one():
    curves = performance_profile(np.array([[3.0], [7.0]]), ["only"])
    assert curves[0].points == ((1.0, 1.0),)


def test_profile_unsolved_cell_never_counts():
    curves = performance_profile(np.array([[1.0, math.inf]]), ["a", "b"])
    assert all(rho == 1.0 for _, rho in curves[0].points)
    assert all(rho == 0.0 for _, rho in curves[1].points)


def test_profile_drops_unsolvable_rows_with_warning():
    t = np.array([[1.0, 2.0], [math.inf, math.inf]])
    with pytest.warns(UserWarning):
        curves = performance_profile(t, ["a", "b"])
    assert curves[0].points[0] == (1.0, 1.0)


def test_profile_curves_monotone_and_bounded():
    rng = np.random.default_rng(77)
    t = rng.uniform(1.0, 100.0, size=(12, 4))
    t[rng.random(t.shape) < 0.2] = math.inf
    curves = performance_profile(t, ["a", "b", "c", "d"])
    best_share = 0.0
    for curve in curves:
        rhos = [rho for _, rho in curve.points]
        assert all(b >= a for a, b in zip(rhos, rhos[1:]))
        assert all(0.0 <= r <= 1.0 for r in rhos)
        best_share += curve.points[0][1] if curve.points[0][0] == 1.0 else 0.0
    assert best_share >= 1.0


def test_profile_rejects_bad_input():
    import warnings

    with pytest.raises(ValueError):
        performance_profile(np.empty((0, 2)), ["a", "b"])
    with pytest.raises(ValueError):
        performance_profile(np.array([[1.0, 2.0]]), ["a"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(ValueError):
            performance_profile(np.array([[math.inf, math.inf]]), ["a", "b"])


def test_single_cell_grid_on_toy_problem():
    grid = ExperimentGrid(
        problems=(_norm_squared_spec(),),
        methods=(MethodSpec("plain", RoseConfig(ell=0, eps=1e-13, exact_seed_solve=True)),),
        metric=Metric.ITERATIONS,
    )
    outcomes = run_grid(grid, repeats=1)
    assert len(outcomes) == 1
    cell = outcomes[0]
    assert cell.status == "GradientTol"
    assert cell.iterations == 1
    assert cell.t == 1.0
    assert cell.f_evals == 2


def test_capped_run_is_recorded_as_unsolved():
    problem = ProblemSpec(
        name="quadratic",
        build=lambda: make_quadratic_benchmark(1e-5),
        x0=np.zeros(16),
        alpha=1e-5,
    )
    method = MethodSpec(
        "scalar-taug",
        RoseConfig(
            ell=5, eps=1e-13, seed_mode=SeedMode.SCALAR_TAU_G,
            exact_seed_solve=True, max_outer=1,
        ),
    )
    grid = ExperimentGrid(problems=(problem,), methods=(method,), metric=Metric.ITERATIONS)
    cell = run_grid(grid, repeats=1)[0]
    assert cell.status == "MaxOuter"
    assert cell.t == math.inf


def test_aborting_cell_does_not_abort_grid():
    def bad_problem():
        zero = ScaledIdentity(0.0, 2)
        state = {"calls": 0}

        def grad(x):
            state["calls"] += 1
            if state["calls"] > 1:
                return np.full(2, np.nan)
            return np.asarray(x, dtype=float).copy()

        return StructuredObjective(
            dim=2,
            eval=lambda x: 0.5 * float(x @ x),
            grad=grad,
            regularizer_hessian=lambda x: zero,
        )

    grid = ExperimentGrid(
        problems=(
            ProblemSpec(name="bad", build=bad_problem, x0=np.array([1.0, 1.0])),
            _norm_squared_spec(),
        ),
        methods=(MethodSpec("plain", RoseConfig(ell=0, exact_seed_solve=True)),),
        metric=Metric.ITERATIONS,
    )
    outcomes = run_grid(grid, repeats=1)
    assert outcomes[0].status == "NonFinite"
    assert outcomes[0].t == math.inf
    assert outcomes[1].status == "GradientTol"


def test_grid_validation():
    with pytest.raises(ValueError):
        ExperimentGrid(problems=(), methods=(MethodSpec("m", RoseConfig()),))


def test_results_csv_round_trip(tmp_path):
    outcomes = [
        CellOutcome(
            problem="quadratic", method="rose-dg-full", alpha=0.1, memory=None,
            iterations=3, f_evals=4, inner_iters_total=0,
            runtime_ms=1.0 / 3.0, final_grad_norm=1e-300, status="GradientTol",
            t=3.0, records=[],
        ),
        CellOutcome(
            problem="quadratic", method="scalar-taug", alpha=1e-5, memory=5,
            iterations=5000, f_evals=12345, inner_iters_total=17,
            runtime_ms=123.456, final_grad_norm=float("inf"), status="MaxOuter",
            t=math.inf, records=[],
        ),
    ]
    path = tmp_path / "results.csv"
    write_results_csv(path, outcomes)
    rows = read_results_csv(path)
    for row, cell in zip(rows, outcomes):
        assert row["problem"] == cell.problem
        assert row["method"] == cell.method
        assert row["alpha"] == cell.alpha
        assert row["memory"] == cell.memory
        assert row["iterations"] == cell.iterations
        assert row["f_evals"] == cell.f_evals
        assert row["inner_iters_total"] == cell.inner_iters_total
        assert row["runtime_ms"] == cell.runtime_ms
        assert row["final_grad_norm"] == cell.final_grad_norm
        assert row["status"] == cell.status


def test_profile_csv_round_trip(tmp_path):
    curves = performance_profile(
        np.array([[1.0, 3.0], [2.0, 1.0], [math.inf, 5.0]]), ["a", "b"]
    )
    path = tmp_path / "profile.csv"
    write_profile_csv(path, curves)
    assert read_profile_csv(path) == curves


def test_cli_run_and_profile_end_to_end(tmp_path):
    results = tmp_path / "results.csv"
    traces = tmp_path / "traces"
    code = main(
        [
            "run",
            "--alpha", "1e-5,1e-1",
            "--memory", "0,inf",
            "--method", "rose-dg-full,rose-dg-upperz",
            "--out", str(results),
            "--trace-dir", str(traces),
            "--repeats", "1",
        ]
    )
    assert code == 0
    rows = read_results_csv(results)
    assert len(rows) == 8
    assert all(row["status"] == "GradientTol" for row in rows)
    assert (traces / "convergence.png").exists()
    trace_files = list(traces.glob("*.csv"))
    assert len(trace_files) == 8

    profile = tmp_path / "profile.csv"
    code = main(
        [
            "profile",
            "--in", str(results),
            "--metric", "iterations",
            "--out", str(profile),
        ]
    )
    assert code == 0
    curves = read_profile_csv(profile)
    assert {c.method for c in curves} == {
        "rose-dg-full[m=0]", "rose-dg-full[m=inf]",
        "rose-dg-upperz[m=0]", "rose-dg-upperz[m=inf]",
    }
    assert profile.with_suffix(".png").exists()


def test_cli_config_file_with_flag_override(tmp_path):
    config = tmp_path / "bench.cfg"
    config.write_text(
        "# sweep configuration\n"
        "alpha = 1e-3\n"
        "memory = 3\n"
        "method = rose-dg-full\n"
        "seed-solve = minres\n"
        "es = true\n"
        "repeats = 1\n"
        f"out = {tmp_path / 'from_file.csv'}\n"
        "no-plot = true\n"
    )
    code = main(["run", "--config", str(config), "--memory", "5"])
    assert code == 0
    rows = read_results_csv(tmp_path / "from_file.csv")
    assert len(rows) == 1
    assert rows[0]["memory"] == 5
    assert rows[0]["inner_iters_total"] > 0


def test_cli_no_plot_skips_figures(tmp_path):
    results = tmp_path / "results.csv"
    code = main(
        [
            "run",
            "--alpha", "1e-1",
            "--memory", "5",
            "--method", "rose-dg-full",
            "--out", str(results),
            "--repeats", "1",
            "--no-plot",
        ]
    )
    assert code == 0
    profile = tmp_path / "profile.csv"
    code = main(
        ["profile", "--in", str(results), "--out", str(profile), "--no-plot"]
    )
    assert code == 0
    assert profile.exists()
    assert not profile.with_suffix(".png").exists()


def test_cli_rejects_unknown_inputs(tmp_path):
    assert main(["run", "--suite", "nope", "--out", str(tmp_path / "r.csv")]) == 1
    assert main(["run", "--method", "not-a-method", "--out", str(tmp_path / "r.csv")]) == 1
    assert main(["profile", "--in", str(tmp_path / "missing.csv")]) == 1
    config = tmp_path / "bad.cfg"
    config.write_text("unknown-key = 1\n")
    assert main(["run", "--config", str(config)]) == 1
