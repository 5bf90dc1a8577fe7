"""Jacobi-preconditioned MINRES for the seed system, and inner budgets.

The seed solve inside the two-loop recursion is the only linear system the
method needs. It is solved matrix free with MINRES, symmetrically
preconditioned by the seed diagonal, under an iteration budget that adapts
to the outer objective progress.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .operators import SymmetricOperator

PRECOND_FLOOR = 1e-12


@dataclass
class SolveReport:
    """Outcome of one seed solve.

    ``relative_residual`` is the preconditioned relative residual at exit;
    ``converged`` holds exactly when it is at or below the requested
    tolerance and no Lanczos breakdown occurred. ``residual_history``
    records the tracked relative residual after each iteration.
    """

    iterations: int
    relative_residual: float
    converged: bool
    breakdown: bool = False
    residual_history: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class EsParams:
    """Thresholds and budgets for progress-adaptive inner iterations."""

    eps0: float = 1e-3
    eps1: float = 1e-4
    eta0: int = 10
    eta1: int = 30
    eta2: int = 50

    def __post_init__(self):
        if not (0.0 < self.eps1 < self.eps0 < 1.0):
            raise ValueError("need 0 < eps1 < eps0 < 1")
        if not (0 < self.eta0 < self.eta1 < self.eta2):
            raise ValueError("need 0 < eta0 < eta1 < eta2")


def es_budget(J_prev: float | None, J_curr: float, p: EsParams) -> int:
    """Iteration budget from relative objective progress.

    Small progress asks for an accurate direction (eta2), medium progress
    for eta1, large progress for a crude one (eta0). The first outer
    iteration has no previous value and uses eta0.
    """
    if J_prev is None:
        return p.eta0
    if not math.isfinite(J_prev):
        raise ValueError("J_prev must be finite")
    change = abs(J_curr - J_prev)
    if change <= p.eps1 * abs(J_prev):
        return p.eta2
    if change <= p.eps0 * abs(J_prev):
        return p.eta1
    return p.eta0


def minres_solve(
    op: SymmetricOperator,
    rhs: np.ndarray,
    precond_diag: np.ndarray,
    max_iter: int,
    rel_tol: float,
) -> tuple[np.ndarray, SolveReport]:
    """Solve op*u = rhs approximately with preconditioned MINRES.

    The diagonal preconditioner is applied symmetrically (by d^(-1/2) on
    both sides); entries of ``precond_diag`` below a small floor are
    replaced by 1. Stops at the first of ``max_iter`` iterations or
    preconditioned relative residual <= ``rel_tol``. A zero right-hand
    side returns u = 0 immediately.
    """
    rhs = np.asarray(rhs, dtype=float)
    n = op.dim
    if rhs.shape != (n,):
        raise ValueError(f"rhs shape {rhs.shape} does not match dimension {n}")
    d = np.asarray(precond_diag, dtype=float).copy()
    if d.shape != (n,):
        raise ValueError("preconditioner diagonal has wrong length")
    d[d < PRECOND_FLOOR] = 1.0
    inv_sqrt_d = 1.0 / np.sqrt(d)

    b_hat = inv_sqrt_d * rhs
    beta1 = float(np.linalg.norm(b_hat))
    if beta1 == 0.0:
        return np.zeros(n), SolveReport(0, 0.0, True)

    def apply_hat(w: np.ndarray) -> np.ndarray:
        return inv_sqrt_d * op.apply(inv_sqrt_d * w)

    # Lanczos plus Givens QR on the tridiagonal system (Paige-Saunders)
    x_hat = np.zeros(n)
    r1 = b_hat.copy()
    r2 = b_hat.copy()
    y = b_hat.copy()
    oldb = 0.0
    beta = beta1
    dbar = 0.0
    epsln = 0.0
    phibar = beta1
    cs = -1.0
    sn = 0.0
    w = np.zeros(n)
    w2 = np.zeros(n)
    tnorm2 = 0.0
    itn = 0
    breakdown = False
    history: list[float] = []

    while itn < max_iter:
        itn += 1
        v = y / beta
        y = apply_hat(v)
        if itn >= 2:
            y -= (beta / oldb) * r1
        alfa = float(v @ y)
        y -= (alfa / beta) * r2
        r1 = r2
        r2 = y
        oldb = beta
        beta = float(np.linalg.norm(y))
        tnorm2 += alfa * alfa + oldb * oldb + beta * beta

        oldeps = epsln
        delta = cs * dbar + sn * alfa
        gbar = sn * dbar - cs * alfa
        epsln = sn * beta
        dbar = -cs * beta
        gamma = math.hypot(gbar, beta)
        gamma = max(gamma, np.finfo(float).eps)
        cs = gbar / gamma
        sn = beta / gamma
        phi = cs * phibar
        phibar = sn * phibar

        w1 = w2
        w2 = w
        w = (v - oldeps * w1 - delta * w2) / gamma
        x_hat = x_hat + phi * w

        history.append(phibar / beta1)
        if phibar <= rel_tol * beta1:
            break
        if beta <= np.finfo(float).eps * math.sqrt(tnorm2):
            breakdown = True
            break

    u = inv_sqrt_d * x_hat
    residual = float(np.linalg.norm(inv_sqrt_d * (rhs - op.apply(u)))) / beta1
    converged = (not breakdown) and residual <= rel_tol
    return u, SolveReport(
        iterations=itn,
        relative_residual=residual,
        converged=converged,
        breakdown=breakdown,
        residual_history=history,
    )
