"""Armijo backtracking and Wolfe-Powell step-size selection.

Both searches work on the scalar restriction phi(a) = J(x + a*d) and its
slope; the first trial step is always the full step a = 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

ZOOM_BUDGET = 30
EXPANSION = 2.0


class LineSearchError(RuntimeError):
    """Raised when no acceptable step is found within the trial budget."""


class LineSearchMode(enum.Enum):
    ARMIJO = "armijo"
    WEAK_WOLFE = "weak_wolfe"
    STRONG_WOLFE = "strong_wolfe"


@dataclass(frozen=True)
class LineSearchConfig:
    """Sufficient-decrease slope sigma, backtracking factor beta, curvature eta."""

    sigma: float = 1e-4
    beta: float = 0.5
    eta: float = 0.9
    mode: LineSearchMode = LineSearchMode.ARMIJO
    max_trials: int = 50

    def __post_init__(self):
        if not (0.0 < self.sigma < self.eta < 1.0):
            raise ValueError("need 0 < sigma < eta < 1")
        if not (0.0 < self.beta < 1.0):
            raise ValueError("need 0 < beta < 1")
        if self.max_trials < 1:
            raise ValueError("max_trials must be >= 1")


@dataclass(frozen=True)
class LineSearchResult:
    """Accepted step, number of phi evaluations, and phi at the step."""

    alpha: float
    evals: int
    value: float


def armijo_backtracking(
    phi: Callable[[float], float],
    phi0: float,
    slope0: float,
    cfg: LineSearchConfig,
) -> LineSearchResult:
    """First step in {1, beta, beta^2, ...} with sufficient decrease.

    Accepts a when phi(a) <= phi0 + a * sigma * slope0. Raises
    ``ValueError`` for a non-descent slope and :class:`LineSearchError`
    when ``max_trials`` trials all fail.
    """
    if slope0 >= 0:
        raise ValueError(f"descent direction required, got slope {slope0}")
    alpha = 1.0
    for trial in range(cfg.max_trials):
        value = phi(alpha)
        if value <= phi0 + alpha * cfg.sigma * slope0:
            return LineSearchResult(alpha=alpha, evals=trial + 1, value=value)
        alpha *= cfg.beta
    raise LineSearchError(f"no sufficient decrease in {cfg.max_trials} trials")


def _curvature_ok(d: float, slope0: float, cfg: LineSearchConfig) -> bool:
    if cfg.mode is LineSearchMode.STRONG_WOLFE:
        return abs(d) <= cfg.eta * abs(slope0)
    return d >= cfg.eta * slope0


def _interpolate(lo: float, phi_lo: float, d_lo: float, hi: float, phi_hi: float) -> float:
    """Minimizer of the quadratic through (lo, phi_lo, d_lo) and (hi, phi_hi).

    Falls back to the bracket midpoint when the model degenerates or its
    minimizer sits within 10 percent of an endpoint.
    """
    h = hi - lo
    denom = 2.0 * (phi_hi - phi_lo - d_lo * h)
    if denom != 0.0:
        a = lo - d_lo * h * h / denom
        inset = 0.1 * abs(h)
        if min(lo, hi) + inset <= a <= max(lo, hi) - inset:
            return a
    return 0.5 * (lo + hi)


def wolfe_search(
    phi: Callable[[float], float],
    dphi: Callable[[float], float],
    phi0: float,
    slope0: float,
    cfg: LineSearchConfig,
) -> LineSearchResult:
    """Step satisfying sufficient decrease plus a curvature condition.

    The weak condition asks dphi(a) >= eta * slope0, the strong one
    |dphi(a)| <= eta * |slope0|. Brackets by doubling, then zooms with
    quadratic interpolation falling back to bisection. ``evals`` counts
    phi evaluations only.
    """
    if slope0 >= 0:
        raise ValueError(f"descent direction required, got slope {slope0}")
    evals = 0

    def zoom(lo, phi_lo, d_lo, hi, phi_hi):
        nonlocal evals
        for _ in range(ZOOM_BUDGET):
            a = _interpolate(lo, phi_lo, d_lo, hi, phi_hi)
            value = phi(a)
            evals += 1
            if value > phi0 + cfg.sigma * a * slope0 or value >= phi_lo:
                hi, phi_hi = a, value
                continue
            d = dphi(a)
            if _curvature_ok(d, slope0, cfg):
                return LineSearchResult(alpha=a, evals=evals, value=value)
            if d * (hi - lo) >= 0:
                hi, phi_hi = lo, phi_lo
            lo, phi_lo, d_lo = a, value, d
        raise LineSearchError("zoom budget exhausted")

    prev_a, prev_value, prev_d = 0.0, phi0, slope0
    alpha = 1.0
    for trial in range(cfg.max_trials):
        value = phi(alpha)
        evals += 1
        if value > phi0 + cfg.sigma * alpha * slope0 or (trial > 0 and value >= prev_value):
            return zoom(prev_a, prev_value, prev_d, alpha, value)
        d = dphi(alpha)
        if _curvature_ok(d, slope0, cfg):
            return LineSearchResult(alpha=alpha, evals=evals, value=value)
        if d >= 0:
            return zoom(alpha, value, d, prev_a, prev_value)
        prev_a, prev_value, prev_d = alpha, value, d
        alpha *= EXPANSION
    raise LineSearchError(f"no bracket found in {cfg.max_trials} expansions")
