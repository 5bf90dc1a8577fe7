"""The outer structured L-BFGS loop.

Each iteration assembles the seed B = D_k + S_k, computes the two-loop
direction with an exact or MINRES seed solve, takes a line-search step,
admits the correction pair through the cautious threshold, and rebuilds
the diagonal part D_{k+1} inside the gradient-dependent trust interval.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .krylov import EsParams, es_budget, minres_solve
from .lbfgs import PairBuffer, UpdatePair, maybe_store, two_loop_direction
from .linesearch import (
    LineSearchConfig,
    LineSearchError,
    LineSearchMode,
    armijo_backtracking,
    wolfe_search,
)
from .operators import DiagonalOp, SumOp, SymmetricOperator, to_dense
from .problems import StructuredObjective
from .scaling import (
    BoundChoice,
    DiagonalSeedVariant,
    SeedFormula,
    TrustInterval,
    bb_scalars,
    build_diagonal_seed,
    cautious_bounds,
    restrict_interval,
    trust_interval,
)

FAIR_J_TOL = 1e-5
FAIR_X_TOL = 1e-3
FAIR_G_TOL = 1e-3


class NonFiniteError(RuntimeError):
    """Objective or gradient became non-finite at an accepted point."""


class SeedMode(enum.Enum):
    """How D_{k+1} is chosen inside the trust interval."""

    DIAGONAL_DS = "ds"
    DIAGONAL_DG = "dg"
    SCALAR_TAU_S = "taus"
    SCALAR_TAU_G = "taug"
    SCALAR_TAU_Z = "tauz"


class Status(enum.Enum):
    GRADIENT_TOL = "GradientTol"
    FAIR_TRIPLE = "FairTriple"
    MAX_OUTER = "MaxOuter"
    LINE_SEARCH_FAIL = "LineSearchFail"


@dataclass(frozen=True)
class InnerSolveConfig:
    """Seed-solve accuracy: tolerance plus a fixed or adaptive budget."""

    rel_tol: float = 1e-2
    max_iter: int = 50
    es: EsParams | None = None


@dataclass(frozen=True)
class RoseConfig:
    """All solver constants.

    ``ell`` is the pair memory (None for unbounded), ``eps`` the gradient
    tolerance. The cautious constants c_s, c0, C0, c1, c2 gate pair
    admission and the seed spectrum. ``exact_seed_solve`` switches the
    seed system from MINRES to a dense Cholesky solve.
    """

    ell: int | None = 5
    eps: float = 1e-13
    c_s: float = 1e-9
    c0: float = 1e-6
    C0: float = 1e6
    c1: float = 1e-6
    c2: float = 1.0
    seed_mode: SeedMode = SeedMode.DIAGONAL_DG
    bound_choice: BoundChoice = BoundChoice.FULL
    line_search: LineSearchConfig = field(default_factory=LineSearchConfig)
    inner: InnerSolveConfig = field(default_factory=InnerSolveConfig)
    exact_seed_solve: bool = False
    max_outer: int = 5000
    fair_stopping: bool = False
    tau_init: float = 1.0

    def __post_init__(self):
        if self.ell is not None and self.ell < 0:
            raise ValueError("ell must be >= 0 or None")
        if self.eps < 0:
            raise ValueError("eps must be >= 0")
        if self.c_s <= 0 or self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("c_s, c1, c2 must be > 0")
        if self.c0 < 0 or self.C0 < self.c0:
            raise ValueError("need 0 <= c0 <= C0")
        if self.max_outer < 1:
            raise ValueError("max_outer must be >= 1")
        if self.tau_init <= 0:
            raise ValueError("tau_init must be > 0")


@dataclass(frozen=True)
class IterationRecord:
    """Per-iteration telemetry row.

    ``seed_interval`` is the restricted trust interval that bounded the
    diagonal seed used at this iteration (degenerate at k = 0).
    """

    k: int
    J: float
    grad_norm: float
    alpha: float
    f_evals: int
    inner_iterations: int
    pair_accepted: bool
    seed_interval: tuple[float, float]


@dataclass(frozen=True)
class StepSnapshot:
    """Full diagnostic state of one iteration, for callbacks and oracles."""

    k: int
    x: np.ndarray
    x_next: np.ndarray
    J: float
    J_next: float
    g: np.ndarray
    g_next: np.ndarray
    direction: np.ndarray
    alpha: float
    slope: float
    seed_diag: np.ndarray
    seed_operator: SymmetricOperator
    regularizer: SymmetricOperator
    pairs_used: tuple[UpdatePair, ...]
    pair_accepted: bool
    seed_interval: tuple[float, float]
    next_interval: TrustInterval | None
    next_seed_diag: np.ndarray | None


@dataclass
class RoseResult:
    x_final: np.ndarray
    records: list[IterationRecord]
    status: Status

    @property
    def iterations(self) -> int:
        return len(self.records)


def _check_finite(value: float, grad: np.ndarray, where: str) -> None:
    if not math.isfinite(value) or not np.all(np.isfinite(grad)):
        raise NonFiniteError(f"non-finite objective or gradient {where}")


class _SeedSolver:
    """Applies the inverse of D + S, exactly or by preconditioned MINRES."""

    def __init__(self, cfg: RoseConfig):
        self._cfg = cfg
        self._dense_key: SymmetricOperator | None = None
        self._dense_s: np.ndarray | None = None
        self.iterations = 0

    def prepare(self, seed_diag: np.ndarray, s_op: SymmetricOperator, budget: int):
        cfg = self._cfg
        self.iterations = 0
        seed = SumOp(DiagonalOp(seed_diag), s_op)
        if cfg.exact_seed_solve:
            if self._dense_key is not s_op:
                self._dense_key = s_op
                self._dense_s = to_dense(s_op)
            factor = cho_factor(self._dense_s + np.diag(seed_diag))

            def solve(rhs: np.ndarray) -> np.ndarray:
                return cho_solve(factor, rhs)

        else:
            precond = seed.diagonal()

            def solve(rhs: np.ndarray) -> np.ndarray:
                u, report = minres_solve(
                    seed, rhs, precond, max_iter=budget, rel_tol=cfg.inner.rel_tol
                )
                self.iterations += report.iterations
                return u

        return seed, solve


def rose_minimize(
    problem: StructuredObjective,
    x0: np.ndarray,
    cfg: RoseConfig,
    callback: Callable[[StepSnapshot], None] | None = None,
) -> RoseResult:
    """Minimize a structured objective from x0 under the given constants.

    Stops when the gradient norm reaches ``cfg.eps``, when the relative
    progress triple holds (if ``fair_stopping``), at ``max_outer``
    iterations, or when the line search fails (partial trace returned).
    With inexact seed solves a non-descent direction is treated as a
    line-search failure. Raises :class:`NonFiniteError` if the objective
    or gradient turns non-finite at an accepted point.
    """
    x = np.array(x0, dtype=float)
    if x.shape != (problem.dim,):
        raise ValueError(f"x0 shape {x.shape} does not match dimension {problem.dim}")
    J_curr = float(problem.eval(x))
    g = np.asarray(problem.grad(x), dtype=float)
    _check_finite(J_curr, g, "at the starting point")
    J0 = J_curr
    records: list[IterationRecord] = []
    if float(np.linalg.norm(g)) <= cfg.eps:
        return RoseResult(x_final=x, records=records, status=Status.GRADIENT_TOL)

    formula = (
        SeedFormula.DS if cfg.seed_mode is SeedMode.DIAGONAL_DS else SeedFormula.DG
    )
    variant = DiagonalSeedVariant(formula=formula, bound_choice=cfg.bound_choice)
    buf = PairBuffer(cfg.ell)
    solver = _SeedSolver(cfg)
    s_op = problem.regularizer_hessian(x)
    seed_diag = np.full(problem.dim, cfg.tau_init)
    seed_interval = (cfg.tau_init, cfg.tau_init)
    J_prev: float | None = None
    status = Status.MAX_OUTER

    for k in range(cfg.max_outer):
        if cfg.inner.es is not None:
            budget = es_budget(J_prev, J_curr, cfg.inner.es)
        else:
            budget = cfg.inner.max_iter
        seed, seed_solve = solver.prepare(seed_diag, s_op, budget)
        pairs_used = buf.pairs
        d = two_loop_direction(g, buf, seed_solve)
        slope = float(g @ d)
        if slope >= 0:
            status = Status.LINE_SEARCH_FAIL
            break

        def phi(a: float) -> float:
            return float(problem.eval(x + a * d))

        try:
            if cfg.line_search.mode is LineSearchMode.ARMIJO:
                ls = armijo_backtracking(phi, J_curr, slope, cfg.line_search)
            else:

                def dphi(a: float) -> float:
                    return float(problem.grad(x + a * d) @ d)

                ls = wolfe_search(phi, dphi, J_curr, slope, cfg.line_search)
        except LineSearchError:
            status = Status.LINE_SEARCH_FAIL
            break

        s = ls.alpha * d
        x_next = x + s
        J_next = ls.value
        g_next = np.asarray(problem.grad(x_next), dtype=float)
        _check_finite(J_next, g_next, f"at iteration {k}")
        y = g_next - g
        accepted = maybe_store(buf, s, y, cfg.c_s)
        grad_norm = float(np.linalg.norm(g_next))
        records.append(
            IterationRecord(
                k=k,
                J=J_next,
                grad_norm=grad_norm,
                alpha=ls.alpha,
                f_evals=ls.evals,
                inner_iterations=solver.iterations,
                pair_accepted=accepted,
                seed_interval=seed_interval,
            )
        )

        done = grad_norm <= cfg.eps
        if done:
            status = Status.GRADIENT_TOL
        elif cfg.fair_stopping:
            fair = (
                abs(J_next - J_curr) <= FAIR_J_TOL * (1.0 + abs(J0))
                and float(np.linalg.norm(s)) <= FAIR_X_TOL * (1.0 + float(np.linalg.norm(x_next)))
                and grad_norm <= FAIR_G_TOL * (1.0 + abs(J0))
            )
            if fair:
                done = True
                status = Status.FAIR_TRIPLE

        next_interval: TrustInterval | None = None
        next_seed_diag: np.ndarray | None = None
        if not done:
            s_op_next = problem.regularizer_hessian(x_next)
            z = y - s_op_next.apply(s)
            bounds = cautious_bounds(grad_norm, cfg)
            bb = bb_scalars(s, z)
            T = trust_interval(bb, bounds)
            T_hat = restrict_interval(T, variant, bb)
            if cfg.seed_mode in (SeedMode.DIAGONAL_DS, SeedMode.DIAGONAL_DG):
                next_seed_diag = build_diagonal_seed(s, z, T_hat, formula, seed_diag).entries
            else:
                if cfg.seed_mode is SeedMode.SCALAR_TAU_S:
                    tau = bb.tau_s
                elif cfg.seed_mode is SeedMode.SCALAR_TAU_G:
                    tau = bb.tau_g
                else:
                    tau = bb.tau_z if bb.tau_z is not None else bb.tau_g
                next_seed_diag = np.full(problem.dim, T_hat.clamp(tau))
            next_interval = T_hat

        if callback is not None:
            callback(
                StepSnapshot(
                    k=k,
                    x=x.copy(),
                    x_next=x_next.copy(),
                    J=J_curr,
                    J_next=J_next,
                    g=g.copy(),
                    g_next=g_next.copy(),
                    direction=d.copy(),
                    alpha=ls.alpha,
                    slope=slope,
                    seed_diag=seed_diag.copy(),
                    seed_operator=seed,
                    regularizer=s_op,
                    pairs_used=pairs_used,
                    pair_accepted=accepted,
                    seed_interval=seed_interval,
                    next_interval=next_interval,
                    next_seed_diag=None if next_seed_diag is None else next_seed_diag.copy(),
                )
            )

        x, g = x_next, g_next
        if done:
            return RoseResult(x_final=x, records=records, status=status)
        seed_diag = next_seed_diag
        seed_interval = (next_interval.lower, next_interval.upper)
        s_op = s_op_next
        J_prev, J_curr = J_curr, J_next

    return RoseResult(x_final=x, records=records, status=status)
