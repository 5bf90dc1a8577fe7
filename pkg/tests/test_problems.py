"""Built-in objectives: formulas, gradients, and structure contracts."""

from __future__ import annotations

import numpy as np
import pytest

from rose_lbfgs.operators import to_dense
from rose_lbfgs.problems import make_quadratic_benchmark, make_toy_nonconvex


def _fd_gradient(f, x, h=1e-6):
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def test_quadratic_vanishes_at_minimizer():
    problem = make_quadratic_benchmark(1e-3)
    x_star = np.ones(16)
    assert problem.eval(x_star) == 0.0
    np.testing.assert_array_equal(problem.grad(x_star), np.zeros(16))


def test_quadratic_gradient_without_stencil():
    problem = make_quadratic_benchmark(0.0)
    expected = -np.exp(-np.arange(16, dtype=float))
    np.testing.assert_allclose(problem.grad(np.zeros(16)), expected, rtol=1e-15)


def test_quadratic_diagonal_condition_number():
    problem = make_quadratic_benchmark(0.0)
    h = problem.exact_full_hessian(np.zeros(16))
    d = np.diag(h)
    assert d.max() / d.min() == pytest.approx(np.exp(15.0), rel=1e-12)


@pytest.mark.parametrize("alpha", [1e-5, 1e-3, 1e-1])
def test_quadratic_hessian_positive_definite(alpha):
    problem = make_quadratic_benchmark(alpha)
    eigs = np.linalg.eigvalsh(problem.exact_full_hessian(np.zeros(16)))
    assert eigs.min() > 0


@pytest.mark.parametrize("alpha", [0.0, 1e-3, 1e-1])
def test_quadratic_gradient_matches_finite_differences(alpha):
    rng = np.random.default_rng(31)
    problem = make_quadratic_benchmark(alpha)
    for _ in range(5):
        x = rng.standard_normal(16)
        g = problem.grad(x)
        fd = _fd_gradient(problem.eval, x)
        assert np.linalg.norm(g - fd) <= 1e-5 * max(1.0, np.linalg.norm(g))


def test_quadratic_regularizer_is_scaled_stencil():
    problem = make_quadratic_benchmark(2.0, stencil_scale=3.0)
    s_dense = to_dense(problem.regularizer_hessian(np.zeros(16)))
    base = make_quadratic_benchmark(1.0, stencil_scale=1.0)
    np.testing.assert_allclose(
        s_dense, 6.0 * to_dense(base.regularizer_hessian(np.zeros(16)))
    )


def test_quadratic_rejects_negative_weight():
    with pytest.raises(ValueError):
        make_quadratic_benchmark(-1.0)


def test_structured_split_consistency_along_trajectory():
    from rose_lbfgs.driver import RoseConfig, rose_minimize

    problem = make_quadratic_benchmark(1e-3)
    d = np.exp(-np.arange(16, dtype=float))
    snaps = []
    cfg = RoseConfig(ell=5, eps=1e-13, exact_seed_solve=True)
    rose_minimize(problem, np.zeros(16), cfg, callback=snaps.append)
    assert snaps
    for snap in snaps:
        s = snap.x_next - snap.x
        y = snap.g_next - snap.g
        z = y - problem.regularizer_hessian(snap.x_next).apply(s)
        assert np.linalg.norm(z - d * s) <= 1e-12 * max(1.0, np.linalg.norm(d * s))


def test_toy_nonconvex_stationary_at_origin():
    problem = make_toy_nonconvex(16, 1e-2)
    assert problem.eval(np.zeros(16)) == 0.0
    np.testing.assert_array_equal(problem.grad(np.zeros(16)), np.zeros(16))


def test_toy_nonconvex_bounded_below_by_zero():
    rng = np.random.default_rng(32)
    problem = make_toy_nonconvex(16, 1e-2)
    for _ in range(20):
        assert problem.eval(rng.uniform(-10, 10, size=16)) >= 0.0


def test_toy_nonconvex_gradient_matches_finite_differences():
    rng = np.random.default_rng(33)
    problem = make_toy_nonconvex(64, 1e-2)
    for _ in range(10):
        x = rng.uniform(-2.0, 2.0, size=64)
        g = problem.grad(x)
        fd = _fd_gradient(problem.eval, x)
        assert np.linalg.norm(g - fd) <= 1e-5 * max(1.0, np.linalg.norm(g))


def test_toy_nonconvex_curvature_changes_sign_across_domain():
    # Convex at the minimizer, concave directions half a period away.
    problem = make_toy_nonconvex(16, 1e-2)
    at_origin = np.linalg.eigvalsh(problem.exact_full_hessian(np.zeros(16)))
    assert at_origin.min() > 0
    shifted = np.linalg.eigvalsh(problem.exact_full_hessian(np.full(16, np.pi)))
    assert shifted.min() < 0


def test_toy_nonconvex_input_validation():
    with pytest.raises(ValueError):
        make_toy_nonconvex(15, 1e-2)
    with pytest.raises(ValueError):
        make_toy_nonconvex(16, 0.0)
