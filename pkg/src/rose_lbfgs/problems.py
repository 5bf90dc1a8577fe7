"""Structured objectives J = D + S and the built-in test problems.

An objective is structured when its regularizer part S has a cheap
positive semi-definite Hessian approximation available as an operator,
while the data part D does not. The solver only ever sees this contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .operators import SparseSymmetric, SymmetricOperator, five_point_laplacian, to_dense


@dataclass(frozen=True)
class StructuredObjective:
    """Callable bundle for a structured cost.

    ``regularizer_hessian(x)`` returns the operator used as the seed part
    S_k at x; it must be positive semi-definite. ``exact_full_hessian`` is
    an optional dense oracle for tests and is never used by the solver.
    """

    dim: int
    eval: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    regularizer_hessian: Callable[[np.ndarray], SymmetricOperator]
    exact_full_hessian: Callable[[np.ndarray], np.ndarray] | None = None


def make_quadratic_benchmark(alpha: float, stencil_scale: float = 1.0) -> StructuredObjective:
    """Ill-conditioned 16-dimensional quadratic with a Laplacian regularizer.

    J(x) = 0.5 (x - x*)' (D + alpha*S) (x - x*) with D_jj = exp(-j) for
    j = 0..15, S the five-point Laplacian on the 4x4 grid, and x* the
    all-ones vector. The regularizer Hessian is the constant alpha*S.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    n = 16
    d = np.exp(-np.arange(n, dtype=float))
    lap = five_point_laplacian(4, stencil_scale)
    s_op = SparseSymmetric(alpha * lap.matrix)
    x_star = np.ones(n)

    def evaluate(x: np.ndarray) -> float:
        r = np.asarray(x, dtype=float) - x_star
        return 0.5 * float(r @ (d * r + s_op.apply(r)))

    def gradient(x: np.ndarray) -> np.ndarray:
        r = np.asarray(x, dtype=float) - x_star
        return d * r + s_op.apply(r)

    def full_hessian(x: np.ndarray) -> np.ndarray:
        return np.diag(d) + to_dense(s_op)

    return StructuredObjective(
        dim=n,
        eval=evaluate,
        grad=gradient,
        regularizer_hessian=lambda x: s_op,
        exact_full_hessian=full_hessian,
    )


def make_toy_nonconvex(n: int, alpha: float) -> StructuredObjective:
    """Non-convex cosine well with a Laplacian regularizer.

    J(x) = sum_i w_i (1 - cos x_i) + (alpha/2) x' S x with weights
    w_i = 1 + i/n (i = 1..n) breaking symmetry and S the five-point
    Laplacian on the sqrt(n) grid. Bounded below by 0 with minimizer 0;
    the data term's Hessian diag(w_i cos x_i) is indefinite away from it.
    """
    m = math.isqrt(n)
    if m * m != n:
        raise ValueError("n must be a perfect square")
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    w = 1.0 + np.arange(1, n + 1, dtype=float) / n
    lap = five_point_laplacian(m)
    s_op = SparseSymmetric(alpha * lap.matrix)

    def evaluate(x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.sum(w * (1.0 - np.cos(x))) + 0.5 * (x @ s_op.apply(x)))

    def gradient(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return w * np.sin(x) + s_op.apply(x)

    def full_hessian(x: np.ndarray) -> np.ndarray:
        return np.diag(w * np.cos(np.asarray(x, dtype=float))) + to_dense(s_op)

    return StructuredObjective(
        dim=n,
        eval=evaluate,
        grad=gradient,
        regularizer_hessian=lambda x: s_op,
        exact_full_hessian=full_hessian,
    )
