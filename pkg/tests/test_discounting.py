import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sysrisk.discounting import (BrownianDrift, LinearDrift, discount_factors_at, find_alpha_star,
                                 laplace_exponent, premium_discount_integral, sample_path)
from sysrisk.errors import DomainError

models = st.one_of(
    st.builds(LinearDrift, st.floats(1e-3, 5.0)),
    st.builds(BrownianDrift, st.floats(1e-3, 5.0), st.floats(0.0, 3.0)),
)


def test_laplace_exponent_examples():
    assert laplace_exponent(LinearDrift(0.4), 0.0) == 0.0
    assert laplace_exponent(BrownianDrift(0.5, 0.3), 0.0) == 0.0
    assert laplace_exponent(LinearDrift(0.4), 1.2) == pytest.approx(-0.48, rel=1e-15)
    assert laplace_exponent(BrownianDrift(0.5, 0.3), 2.0) == pytest.approx(-0.82, rel=1e-14)


def test_alpha_star():
    star = find_alpha_star(LinearDrift(0.4), 1.2)
    assert star == pytest.approx(2.2)
    assert laplace_exponent(LinearDrift(0.4), star) == pytest.approx(-0.88)
    star = find_alpha_star(BrownianDrift(1.0, 1.0), 1.2)
    assert 1.2 < star < 2.0
    assert star == pytest.approx(1.6)
    assert laplace_exponent(BrownianDrift(1.0, 1.0), star) == pytest.approx(-0.32)
    assert find_alpha_star(BrownianDrift(0.1, 1.0), 1.2) is None


def test_positive_mean_required():
    with pytest.raises(DomainError):
        LinearDrift(0.0)
    with pytest.raises(DomainError):
        BrownianDrift(-0.1, 1.0)


@given(models, st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 0.99))
def test_convexity(model, a, b, v):
    lhs = laplace_exponent(model, v * a + (1 - v) * b)
    rhs = v * laplace_exponent(model, a) + (1 - v) * laplace_exponent(model, b)
    assert lhs <= rhs + 1e-12


@given(models, st.floats(0.05, 5.0))
def test_negative_below_alpha_star(model, alpha):
    star = find_alpha_star(model, alpha)
    if star is None:
        return
    for p in np.linspace(star / 200, star, 200):
        assert laplace_exponent(model, p) < 0


def test_linear_discount_factors():
    np.testing.assert_allclose(discount_factors_at(LinearDrift(0.4), [1.0]), [math.exp(-0.4)], rtol=1e-15)
    assert discount_factors_at(LinearDrift(0.4), [0.0])[0] == 1.0
    rng = np.random.default_rng(0)
    assert discount_factors_at(BrownianDrift(0.3, 1.0), [0.0], rng)[0] == 1.0


def test_degenerate_brownian_equals_linear():
    times = [0.1, 0.5, 0.5, 2.0]
    np.testing.assert_array_equal(
        discount_factors_at(BrownianDrift(0.4, 0.0), times, np.random.default_rng(1)),
        discount_factors_at(LinearDrift(0.4), times),
    )


def test_unsorted_times_rejected():
    with pytest.raises(DomainError):
        discount_factors_at(LinearDrift(0.4), [0.5, 0.1])


def test_premium_integral_examples(golden):
    assert premium_discount_integral(LinearDrift(0.4), 0.0) == 0.0
    assert premium_discount_integral(LinearDrift(0.4), 1.0) == pytest.approx(
        golden["premium_integral_linear"], rel=1e-14)
    assert abs(premium_discount_integral(LinearDrift(1e-12), 1.0) - 1.0) < 1e-9


def test_brownian_premium_needs_path():
    with pytest.raises(DomainError):
        premium_discount_integral(BrownianDrift(0.4, 0.2), 1.0)


@pytest.mark.parametrize("mu", [0.1, 0.4, 2.0])
def test_quadrature_matches_closed_form_when_sigma_zero(mu):
    path = sample_path(BrownianDrift(mu, 0.0), 1.0, [0.123, 0.77], np.random.default_rng(0), step=1e-3)
    closed = premium_discount_integral(LinearDrift(mu), 1.0)
    assert abs(premium_discount_integral(BrownianDrift(mu, 0.0), 1.0, path) - closed) < 1e-8


def test_path_contains_claim_times():
    times = np.array([0.0, 0.25, 0.25, 0.9])
    path = sample_path(BrownianDrift(0.4, 0.5), 1.0, times, np.random.default_rng(3))
    np.testing.assert_array_equal(path.grid[path.claim_index], times)
    assert path.grid[0] == 0.0 and path.grid[-1] == 1.0
    assert path.claim_factors[0] == 1.0


def test_brownian_path_mean():
    model = BrownianDrift(0.3, 0.6)
    t = 1.5
    rng = np.random.default_rng(4)
    n = 100_000
    values = np.array([discount_factors_at(model, [0.7, t], rng)[-1] for _ in range(n)])
    se = values.std(ddof=1) / math.sqrt(n)
    assert abs(values.mean() - math.exp(t * laplace_exponent(model, 1.0))) < 3 * se


def test_brownian_premium_integral_mean():
    # E int_0^t e^{-R_s} ds = int_0^t e^{s phi(1)} ds
    model = BrownianDrift(0.3, 0.6)
    rng = np.random.default_rng(5)
    n = 5_000
    vals = np.array([premium_discount_integral(model, 1.0, sample_path(model, 1.0, [], rng, step=0.01))
                     for _ in range(n)])
    phi1 = laplace_exponent(model, 1.0)
    exact = math.expm1(phi1) / phi1
    se = vals.std(ddof=1) / math.sqrt(n)
    assert abs(vals.mean() - exact) < 3 * se + 1e-4
