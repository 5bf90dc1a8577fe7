"""Command-line benchmark front end.

Two subcommands: ``run`` sweeps a problem suite against a set of method
configurations and writes one summary row per cell; ``profile`` turns a
results file into performance-profile curves. Options can also be given
in a flat ``key = value`` config file; explicit command-line flags win.
"""

from __future__ import annotations

import argparse
import sys
from functools import partial
from pathlib import Path

import numpy as np

from .bench import (
    ExperimentGrid,
    Metric,
    MethodSpec,
    ProblemSpec,
    SOLVED_STATUSES,
    performance_profile,
    read_results_csv,
    run_grid,
    write_profile_csv,
    write_results_csv,
)
from .driver import InnerSolveConfig, RoseConfig, SeedMode
from .krylov import EsParams
from .problems import make_quadratic_benchmark
from .scaling import BoundChoice

METHOD_REGISTRY = {
    "rose-ds-full": (SeedMode.DIAGONAL_DS, BoundChoice.FULL),
    "rose-ds-upperz": (SeedMode.DIAGONAL_DS, BoundChoice.UPPER_Z),
    "rose-ds-bbband": (SeedMode.DIAGONAL_DS, BoundChoice.BB_BAND),
    "rose-dg-full": (SeedMode.DIAGONAL_DG, BoundChoice.FULL),
    "rose-dg-upperz": (SeedMode.DIAGONAL_DG, BoundChoice.UPPER_Z),
    "rose-dg-bbband": (SeedMode.DIAGONAL_DG, BoundChoice.BB_BAND),
    "scalar-taus": (SeedMode.SCALAR_TAU_S, BoundChoice.FULL),
    "scalar-taug": (SeedMode.SCALAR_TAU_G, BoundChoice.FULL),
    "scalar-tauz": (SeedMode.SCALAR_TAU_Z, BoundChoice.FULL),
}

RUN_DEFAULTS = {
    "suite": "quadratic",
    "alpha": "1e-5,1e-3,1e-1",
    "memory": "0,3,5,10,inf",
    "method": "rose-dg-full,rose-dg-upperz,rose-dg-bbband,scalar-taug",
    "out": "results.csv",
    "trace-dir": "",
    "stencil-scale": "1.0",
    "seed-solve": "exact",
    "es": "false",
    "eps": "1e-13",
    "max-outer": "5000",
    "repeats": "3",
    "no-plot": "false",
}

PROFILE_DEFAULTS = {
    "in": "results.csv",
    "metric": "runtime",
    "out": "profile.csv",
    "no-plot": "false",
}

METRIC_COLUMN = {
    Metric.RUNTIME: "runtime_ms",
    Metric.ITERATIONS: "iterations",
    Metric.F_EVALS: "f_evals",
    Metric.INNER_ITERATIONS: "inner_iters_total",
}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def load_config_file(path: str | Path) -> dict[str, str]:
    """Read a flat ``key = value`` file; ``#`` starts a comment line."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, _, value = stripped.partition("=")
        values[key.strip().lower().replace("_", "-")] = value.strip()
    return values


def _merge(defaults: dict[str, str], config_path: str | None, overrides: dict[str, str]) -> dict[str, str]:
    merged = dict(defaults)
    if config_path:
        file_values = load_config_file(config_path)
        unknown = set(file_values) - set(defaults)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_values)
    merged.update(overrides)
    return merged


def _parse_memory(token: str) -> int | None:
    return None if token == "inf" else int(token)


def _split(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench", description="Structured limited-memory quasi-Newton benchmarks."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a benchmark sweep and write a results CSV")
    run_p.add_argument("--suite", help="problem suite (quadratic)")
    run_p.add_argument("--alpha", help="comma-separated regularizer weights")
    run_p.add_argument("--memory", help="comma-separated pair capacities; 'inf' keeps all")
    run_p.add_argument("--method", help="comma-separated method names")
    run_p.add_argument("--out", help="results CSV path")
    run_p.add_argument("--trace-dir", help="directory for per-cell iteration traces")
    run_p.add_argument("--stencil-scale", help="off-diagonal scale of the stencil term")
    solver = run_p.add_mutually_exclusive_group()
    solver.add_argument(
        "--exact-seed", action="store_true", default=None, help="factorize seed solves"
    )
    solver.add_argument(
        "--minres", action="store_true", default=None, help="iterative seed solves"
    )
    run_p.add_argument(
        "--es", action="store_true", default=None, help="adaptive inner-iteration budgets"
    )
    run_p.add_argument("--eps", help="gradient-norm stopping tolerance")
    run_p.add_argument("--max-outer", help="outer iteration cap")
    run_p.add_argument("--repeats", help="timed repetitions per cell")
    run_p.add_argument("--config", help="flat key = value config file")
    run_p.add_argument(
        "--no-plot", action="store_true", default=None, help="skip figure rendering"
    )

    prof_p = sub.add_parser("profile", help="build performance profiles from results")
    prof_p.add_argument("--in", dest="in_path", help="results CSV to read")
    prof_p.add_argument(
        "--metric",
        choices=[m.value for m in Metric],
        help="column to profile",
    )
    prof_p.add_argument("--out", help="profile CSV path")
    prof_p.add_argument("--config", help="flat key = value config file")
    prof_p.add_argument(
        "--no-plot", action="store_true", default=None, help="skip figure rendering"
    )
    return parser


def _run_overrides(args: argparse.Namespace) -> dict[str, str]:
    overrides: dict[str, str] = {}
    for key in ("suite", "alpha", "memory", "method", "out", "trace_dir",
                "stencil_scale", "eps", "max_outer", "repeats"):
        value = getattr(args, key)
        if value is not None:
            overrides[key.replace("_", "-")] = value
    if args.exact_seed:
        overrides["seed-solve"] = "exact"
    if args.minres:
        overrides["seed-solve"] = "minres"
    if args.es:
        overrides["es"] = "true"
    if args.no_plot:
        overrides["no-plot"] = "true"
    return overrides


def _method_config(name: str, memory: int | None, opts: dict[str, str]) -> RoseConfig:
    if name not in METHOD_REGISTRY:
        raise ValueError(f"unknown method {name!r}; choose from {sorted(METHOD_REGISTRY)}")
    seed_mode, bound_choice = METHOD_REGISTRY[name]
    use_es = _parse_bool(opts["es"])
    inner = InnerSolveConfig(es=EsParams() if use_es else None)
    return RoseConfig(
        ell=memory,
        eps=float(opts["eps"]),
        seed_mode=seed_mode,
        bound_choice=bound_choice,
        inner=inner,
        exact_seed_solve=opts["seed-solve"] == "exact",
        max_outer=int(opts["max-outer"]),
    )


def _cmd_run(args: argparse.Namespace) -> int:
    opts = _merge(RUN_DEFAULTS, args.config, _run_overrides(args))
    if opts["suite"] != "quadratic":
        raise ValueError(f"unknown suite {opts['suite']!r}")
    if opts["seed-solve"] not in ("exact", "minres"):
        raise ValueError(f"seed-solve must be 'exact' or 'minres', got {opts['seed-solve']!r}")

    alphas = [float(tok) for tok in _split(opts["alpha"])]
    memories = [_parse_memory(tok) for tok in _split(opts["memory"])]
    method_names = _split(opts["method"])
    if not alphas or not memories or not method_names:
        raise ValueError("alpha, memory, and method lists must be non-empty")
    stencil_scale = float(opts["stencil-scale"])

    problems = tuple(
        ProblemSpec(
            name="quadratic",
            build=partial(make_quadratic_benchmark, alpha, stencil_scale),
            x0=np.zeros(16),
            alpha=alpha,
        )
        for alpha in alphas
    )
    methods = tuple(
        MethodSpec(name=name, config=_method_config(name, memory, opts))
        for name in method_names
        for memory in memories
    )
    grid = ExperimentGrid(problems=problems, methods=methods)

    trace_dir = opts["trace-dir"] or None
    outcomes = run_grid(grid, repeats=int(opts["repeats"]), trace_dir=trace_dir)
    write_results_csv(opts["out"], outcomes)
    print(f"wrote {len(outcomes)} rows to {opts['out']}")
    if trace_dir is not None and not _parse_bool(opts["no-plot"]):
        from .plots import save_convergence_plot

        figure_path = Path(trace_dir) / "convergence.png"
        save_convergence_plot(outcomes, figure_path)
        print(f"wrote {figure_path}")
    return 0


def _cmd_profile(args: argparse.Namespace) -> int:
    overrides: dict[str, str] = {}
    if args.in_path is not None:
        overrides["in"] = args.in_path
    if args.metric is not None:
        overrides["metric"] = args.metric
    if args.out is not None:
        overrides["out"] = args.out
    if args.no_plot:
        overrides["no-plot"] = "true"
    opts = _merge(PROFILE_DEFAULTS, args.config, overrides)

    rows = read_results_csv(opts["in"])
    if not rows:
        raise ValueError(f"no data rows in {opts['in']}")
    metric = Metric(opts["metric"])
    column = METRIC_COLUMN[metric]

    problem_keys: list[tuple] = []
    solver_keys: list[tuple] = []
    for row in rows:
        pkey = (row["problem"], row["alpha"])
        skey = (row["method"], row["memory"])
        if pkey not in problem_keys:
            problem_keys.append(pkey)
        if skey not in solver_keys:
            solver_keys.append(skey)

    t = np.full((len(problem_keys), len(solver_keys)), np.inf)
    for row in rows:
        i = problem_keys.index((row["problem"], row["alpha"]))
        j = solver_keys.index((row["method"], row["memory"]))
        if row["status"] in SOLVED_STATUSES:
            t[i, j] = float(row[column])

    methods_seen: dict[str, set] = {}
    for method, memory in solver_keys:
        methods_seen.setdefault(method, set()).add(memory)
    labels = [
        method
        if len(methods_seen[method]) == 1
        else f"{method}[m={'inf' if memory is None else memory}]"
        for method, memory in solver_keys
    ]

    curves = performance_profile(t, labels)
    write_profile_csv(opts["out"], curves)
    print(f"wrote {opts['out']}")
    if not _parse_bool(opts["no-plot"]):
        from .plots import save_profile_plot

        figure_path = Path(opts["out"]).with_suffix(".png")
        save_profile_plot(curves, figure_path)
        print(f"wrote {figure_path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_profile(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
