"""Quadrature engine tests: accuracy, batching, partition invariance, failure."""

import math

import numpy as np
import pytest

from kerrshutter import QuadratureError
from kerrshutter.quadrature import simpson_converged


def test_polynomial_exact():
    value, info = simpson_converged(lambda x: x**3 - 2 * x + 1, 0.0, 2.0, rel_tol=1e-10)
    assert value == pytest.approx(2.0, rel=1e-12)  # x^4/4 - x^2 + x at 2
    assert info["levels"] >= 1


def test_gaussian_integral():
    sigma = 0.7
    value, _ = simpson_converged(
        lambda x: np.exp(-0.5 * (x / sigma) ** 2), -8 * sigma, 8 * sigma, rel_tol=1e-9
    )
    assert value == pytest.approx(sigma * math.sqrt(2 * math.pi), rel=1e-9)


def test_reversed_and_empty_interval():
    fwd, _ = simpson_converged(np.sin, 0.0, 1.0, rel_tol=1e-9)
    rev, _ = simpson_converged(np.sin, 1.0, 0.0, rel_tol=1e-9)
    assert rev == pytest.approx(-fwd, rel=1e-12)
    zero, _ = simpson_converged(np.sin, 1.0, 1.0, rel_tol=1e-9)
    assert zero == 0.0


def test_zero_integrand_converges_immediately():
    value, info = simpson_converged(lambda x: np.zeros_like(x), 0.0, 1.0, rel_tol=1e-9)
    assert value == 0.0
    assert info["levels"] == 1


def test_batched_integrand():
    centers = np.array([-0.5, 0.0, 0.4])

    def f(x):
        return np.exp(-((x[None, :] - centers[:, None]) ** 2))

    values, _ = simpson_converged(f, -10.0, 10.0, rel_tol=1e-9)
    assert values.shape == (3,)
    assert np.allclose(values, math.sqrt(math.pi), rtol=1e-9)


def test_batch_matches_elementwise_bit_exact():
    """Each batch element freezes at its own level: partitioning cannot change results."""
    centers = np.array([-1.0, 0.0, 0.1, 2.5])

    def batch(x):
        return np.exp(-((x[None, :] - centers[:, None]) ** 2) / 0.3)

    together, _ = simpson_converged(batch, -6.0, 6.0, rel_tol=1e-8)
    for i, c in enumerate(centers):
        alone, _ = simpson_converged(lambda x, c=c: np.exp(-((x - c) ** 2) / 0.3), -6.0, 6.0, rel_tol=1e-8)
        assert alone == together[i]  # bitwise


def test_non_convergence_raises_with_diagnostics():
    # a step at an irrational point defeats Simpson at tight tolerance
    def f(x):
        return np.where(x < math.sqrt(2) / 2, 0.0, 1.0)

    with pytest.raises(QuadratureError) as err:
        simpson_converged(f, 0.0, 1.0, rel_tol=1e-12, max_levels=6)
    assert err.value.levels == 6
    assert err.value.last_change > 0


def test_abs_floor_accepts_negligible_values():
    value, _ = simpson_converged(
        lambda x: np.exp(-((x - 50.0) ** 2)), 0.0, 1.0, rel_tol=1e-9, abs_floor=1e-15
    )
    assert value == pytest.approx(0.0, abs=1e-15)
