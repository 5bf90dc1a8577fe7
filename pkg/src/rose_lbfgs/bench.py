"""Experiment grids, CSV emission, and performance profiles.

A grid crosses problems with method configurations, records one summary
row per cell, and never lets a failed cell abort the sweep; failures get
an infinite metric value. Profiles follow the cumulative-ratio
construction: rho_s(tau) is the fraction of problems method s solves
within a factor tau of the per-problem best.
"""

from __future__ import annotations

import csv
import enum
import math
import time
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .driver import (
    IterationRecord,
    NonFiniteError,
    RoseConfig,
    RoseResult,
    Status,
    rose_minimize,
)
from .problems import StructuredObjective

RESULT_COLUMNS = [
    "problem",
    "method",
    "alpha",
    "memory",
    "iterations",
    "f_evals",
    "inner_iters_total",
    "runtime_ms",
    "final_grad_norm",
    "status",
]

SOLVED_STATUSES = (Status.GRADIENT_TOL.value, Status.FAIR_TRIPLE.value)


class Metric(enum.Enum):
    RUNTIME = "runtime"
    ITERATIONS = "iterations"
    F_EVALS = "f_evals"
    INNER_ITERATIONS = "inner_iterations"


@dataclass(frozen=True)
class ProblemSpec:
    """One benchmark instance: a builder plus its starting point."""

    name: str
    build: Callable[[], StructuredObjective]
    x0: np.ndarray
    alpha: float | None = None


@dataclass(frozen=True)
class MethodSpec:
    name: str
    config: RoseConfig


@dataclass(frozen=True)
class ExperimentGrid:
    problems: tuple[ProblemSpec, ...]
    methods: tuple[MethodSpec, ...]
    metric: Metric = Metric.RUNTIME

    def __post_init__(self):
        if not self.problems or not self.methods:
            raise ValueError("grid needs at least one problem and one method")


@dataclass
class CellOutcome:
    """Summary of one (problem, method) cell; ``t`` is inf when unsolved."""

    problem: str
    method: str
    alpha: float | None
    memory: int | None
    iterations: int
    f_evals: int
    inner_iters_total: int
    runtime_ms: float
    final_grad_norm: float
    status: str
    t: float
    records: list[IterationRecord]


@dataclass(frozen=True)
class ProfileCurve:
    """Right-continuous step curve (tau, rho) for one method, rho in [0, 1]."""

    method: str
    points: tuple[tuple[float, float], ...]


def _metric_value(metric: Metric, outcome: CellOutcome) -> float:
    if metric is Metric.RUNTIME:
        return outcome.runtime_ms
    if metric is Metric.ITERATIONS:
        return float(outcome.iterations)
    if metric is Metric.F_EVALS:
        return float(outcome.f_evals)
    return float(outcome.inner_iters_total)


def run_cell(
    spec: ProblemSpec, method: MethodSpec, metric: Metric, repeats: int = 3
) -> CellOutcome:
    """Run one cell to termination, timing the median of ``repeats`` runs."""
    problem = spec.build()
    times_ms = []
    result: RoseResult | None = None
    failure: str | None = None
    for _ in range(max(1, repeats)):
        start = time.perf_counter()
        try:
            run = rose_minimize(problem, spec.x0, method.config)
        except NonFiniteError:
            failure = "NonFinite"
            run = None
        times_ms.append((time.perf_counter() - start) * 1e3)
        if result is None and run is not None:
            result = run
    runtime_ms = float(np.median(times_ms))

    if result is None:
        outcome = CellOutcome(
            problem=spec.name,
            method=method.name,
            alpha=spec.alpha,
            memory=method.config.ell,
            iterations=0,
            f_evals=0,
            inner_iters_total=0,
            runtime_ms=runtime_ms,
            final_grad_norm=math.inf,
            status=failure or "NonFinite",
            t=math.inf,
            records=[],
        )
        return outcome

    records = result.records
    if records:
        grad_norm = records[-1].grad_norm
    else:
        grad_norm = float(np.linalg.norm(problem.grad(result.x_final)))
    outcome = CellOutcome(
        problem=spec.name,
        method=method.name,
        alpha=spec.alpha,
        memory=method.config.ell,
        iterations=len(records),
        f_evals=1 + sum(r.f_evals for r in records),
        inner_iters_total=sum(r.inner_iterations for r in records),
        runtime_ms=runtime_ms,
        final_grad_norm=grad_norm,
        status=result.status.value,
        t=math.nan,
        records=records,
    )
    solved = outcome.status in SOLVED_STATUSES
    outcome.t = _metric_value(metric, outcome) if solved else math.inf
    return outcome


def run_grid(
    grid: ExperimentGrid, repeats: int = 3, trace_dir: str | Path | None = None
) -> list[CellOutcome]:
    """Run every cell of the grid; failures never abort the sweep."""
    outcomes = []
    for spec in grid.problems:
        for method in grid.methods:
            outcome = run_cell(spec, method, grid.metric, repeats=repeats)
            outcomes.append(outcome)
            if trace_dir is not None:
                write_trace_csv(Path(trace_dir) / (_cell_slug(outcome) + ".csv"), outcome)
    return outcomes


def performance_profile(
    t: np.ndarray, method_names: list[str]
) -> list[ProfileCurve]:
    """Cumulative performance-ratio curves from a problems-by-methods matrix.

    Rows without any finite entry are dropped with a warning. Each curve
    is evaluated at every distinct finite ratio; ratios are 1 where a
    cell ties the row best.
    """
    t = np.asarray(t, dtype=float)
    if t.ndim != 2 or t.size == 0:
        raise ValueError("need a non-empty problems-by-methods matrix")
    if t.shape[1] != len(method_names):
        raise ValueError("method_names length does not match matrix columns")
    finite_rows = np.isfinite(t).any(axis=1)
    if not finite_rows.all():
        warnings.warn(
            f"dropping {int((~finite_rows).sum())} problem(s) no method solved",
            stacklevel=2,
        )
    t = t[finite_rows]
    if t.shape[0] == 0:
        raise ValueError("no problem was solved by any method")
    best = np.nanmin(np.where(np.isfinite(t), t, np.nan), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(t == best[:, None], 1.0, t / best[:, None])
    taus = np.unique(ratios[np.isfinite(ratios)])
    curves = []
    n_problems = t.shape[0]
    for j, name in enumerate(method_names):
        column = ratios[:, j]
        points = tuple(
            (float(tau), float(np.count_nonzero(column <= tau) / n_problems))
            for tau in taus
        )
        curves.append(ProfileCurve(method=name, points=points))
    return curves


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _cell_slug(outcome: CellOutcome) -> str:
    mem = "inf" if outcome.memory is None else str(outcome.memory)
    parts = [outcome.problem]
    if outcome.alpha is not None:
        parts.append(f"a{outcome.alpha:g}")
    parts.extend([outcome.method, f"m{mem}"])
    return "_".join(parts).replace("/", "-")


def write_results_csv(path: str | Path, outcomes: list[CellOutcome]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for o in outcomes:
            writer.writerow(
                [
                    o.problem,
                    o.method,
                    _fmt(o.alpha),
                    "inf" if o.memory is None else str(o.memory),
                    str(o.iterations),
                    str(o.f_evals),
                    str(o.inner_iters_total),
                    repr(o.runtime_ms),
                    repr(o.final_grad_norm),
                    o.status,
                ]
            )


def read_results_csv(path: str | Path) -> list[dict]:
    """Parse a results file back into typed rows (floats round-trip exactly)."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RESULT_COLUMNS:
            raise ValueError(f"unexpected results header: {reader.fieldnames}")
        for raw in reader:
            rows.append(
                {
                    "problem": raw["problem"],
                    "method": raw["method"],
                    "alpha": float(raw["alpha"]) if raw["alpha"] else None,
                    "memory": None if raw["memory"] == "inf" else int(raw["memory"]),
                    "iterations": int(raw["iterations"]),
                    "f_evals": int(raw["f_evals"]),
                    "inner_iters_total": int(raw["inner_iters_total"]),
                    "runtime_ms": float(raw["runtime_ms"]),
                    "final_grad_norm": float(raw["final_grad_norm"]),
                    "status": raw["status"],
                }
            )
    return rows


def write_trace_csv(path: str | Path, outcome: CellOutcome) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "k",
                "J",
                "grad_norm",
                "alpha",
                "f_evals",
                "inner_iterations",
                "pair_accepted",
                "seed_lower",
                "seed_upper",
            ]
        )
        for r in outcome.records:
            writer.writerow(
                [
                    str(r.k),
                    repr(r.J),
                    repr(r.grad_norm),
                    repr(r.alpha),
                    str(r.f_evals),
                    str(r.inner_iterations),
                    str(r.pair_accepted),
                    repr(r.seed_interval[0]),
                    repr(r.seed_interval[1]),
                ]
            )


def write_profile_csv(path: str | Path, curves: list[ProfileCurve]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "tau", "rho"])
        for curve in curves:
            for tau, rho in curve.points:
                writer.writerow([curve.method, repr(tau), repr(rho)])


def read_profile_csv(path: str | Path) -> list[ProfileCurve]:
    by_method: dict[str, list[tuple[float, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["method", "tau", "rho"]:
            raise ValueError(f"unexpected profile header: {reader.fieldnames}")
        for raw in reader:
            by_method.setdefault(raw["method"], []).append(
                (float(raw["tau"]), float(raw["rho"]))
            )
    return [ProfileCurve(method=m, points=tuple(p)) for m, p in by_method.items()]
