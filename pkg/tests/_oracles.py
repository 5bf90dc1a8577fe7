"""Dense reference computations the tests check the package against."""

from __future__ import annotations

import numpy as np

from rose_lbfgs.operators import DiagonalOp
from rose_lbfgs.problems import StructuredObjective


def bfgs_update(B: np.ndarray, s: np.ndarray, y: np.ndarray) -> np.ndarray:
    """One dense rank-two update: B + yy'/(y's) - Bss'B/(s'Bs)."""
    Bs = B @ s
    return B + np.outer(y, y) / (y @ s) - np.outer(Bs, Bs) / (s @ Bs)


def dense_recursion(seed: np.ndarray, pairs) -> np.ndarray:
    """Apply the rank-two update over (s, y) pairs, oldest to newest."""
    B = np.array(seed, dtype=float)
    for s, y in pairs:
        B = bfgs_update(B, s, y)
    return B


def dense_direction(g: np.ndarray, seed: np.ndarray, pairs) -> np.ndarray:
    """Reference direction -(B)^(-1) g with B built densely."""
    return -np.linalg.solve(dense_recursion(seed, pairs), g)


def armijo_enumeration(phi, phi0, slope0, sigma, beta, max_trials):
    """First member of {1, beta, beta^2, ...} passing sufficient decrease."""
    alpha = 1.0
    for trial in range(max_trials):
        if phi(alpha) <= phi0 + alpha * sigma * slope0:
            return alpha, trial + 1
        alpha *= beta
    return None, max_trials


def grid_minimize(f, lo: float, hi: float, coarse: int = 2001, refinements: int = 12) -> float:
    """Scalar minimizer of f on [lo, hi] by iterated grid refinement."""
    for _ in range(refinements):
        grid = np.linspace(lo, hi, coarse)
        values = np.array([f(t) for t in grid])
        i = int(np.argmin(values))
        lo = grid[max(0, i - 1)]
        hi = grid[min(coarse - 1, i + 1)]
    return 0.5 * (lo + hi)


def random_spd(rng: np.random.Generator, n: int, eig_low: float = 0.5, eig_high: float = 5.0) -> np.ndarray:
    """Random symmetric positive definite matrix with bounded spectrum."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eigs = rng.uniform(eig_low, eig_high, size=n)
    return (q * eigs) @ q.T


def make_diagonal_quadratic(
    d: np.ndarray, s_diag: np.ndarray, x_star: np.ndarray
) -> StructuredObjective:
    """Quadratic 0.5 (x-x*)'(D+S)(x-x*) with diagonal D and diagonal S."""
    d = np.asarray(d, dtype=float)
    s_diag = np.asarray(s_diag, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    h = d + s_diag
    s_op = DiagonalOp(s_diag)

    def evaluate(x):
        r = np.asarray(x, dtype=float) - x_star
        return 0.5 * float(r @ (h * r))

    def gradient(x):
        r = np.asarray(x, dtype=float) - x_star
        return h * r

    return StructuredObjective(
        dim=d.size,
        eval=evaluate,
        grad=gradient,
        regularizer_hessian=lambda x: s_op,
        exact_full_hessian=lambda x: np.diag(h),
    )
