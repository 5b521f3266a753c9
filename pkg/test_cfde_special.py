#!/usr/bin/env python3
"""
Tests for Gamma/Beta, principal powers and Gauss-Jacobi rules.
"""

import math

import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings, strategies as st

from cfde_special import (
    DomainError,
    SingularityError,
    beta,
    gamma,
    gamma_ratio,
    jacobi_rule,
    log_gamma,
    ppow,
    principal_arg,
)

X_GRID = np.round(np.arange(1, 51) * 0.1, 10)


def test_gamma_known_values():
    assert gamma(1) == pytest.approx(1.0, rel=1e-14)
    assert gamma(2) == pytest.approx(1.0, rel=1e-14)
    assert gamma(1.5) == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-13)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)


@pytest.mark.parametrize("x", X_GRID)
def test_gamma_matches_scipy(x):
    assert gamma(x) == pytest.approx(sc.gamma(x), rel=1e-13)


@pytest.mark.parametrize("x", X_GRID)
def test_gamma_recurrence(x):
    assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, float("nan")])
def test_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        gamma(x)


def test_log_gamma_and_ratio():
    assert log_gamma(200.0) == pytest.approx(sc.gammaln(200.0), rel=1e-13)
    assert gamma_ratio(3.5, 2.5) == pytest.approx(2.5, rel=1e-13)
    assert gamma_ratio(300.5, 300.0) == pytest.approx(math.exp(sc.gammaln(300.5) - sc.gammaln(300.0)), rel=1e-11)


def test_beta_values():
    assert beta(1, 1) == pytest.approx(1.0, rel=1e-14)
    assert beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-13)
    assert beta(0.7, 0.3) == pytest.approx(math.pi / math.sin(0.3 * math.pi), rel=1e-12)
    assert beta(0.7, 0.3) == pytest.approx(3.8832220774509327, rel=1e-12)
    with pytest.raises(DomainError):
        beta(0, 1)


def test_ppow_examples():
    assert ppow(4, 0.5) == pytest.approx(2.0, abs=1e-15)
    assert ppow(-1, 0.5) == pytest.approx(1j, abs=1e-15)
    assert ppow(2j, 0.5) == pytest.approx(1 + 1j, abs=1e-15)
    assert ppow(0, 0.5) == 0
    assert ppow(0, 0.0) == 1


def test_ppow_negative_zero_imaginary_part_stays_on_principal_branch():
    w = complex(-4.0, -0.0)
    assert principal_arg(w) == pytest.approx(math.pi)
    assert ppow(w, 0.5) == pytest.approx(2j, abs=1e-15)


def test_ppow_zero_to_negative_power_raises():
    with pytest.raises(SingularityError):
        ppow(0, -0.5)
    with pytest.raises(SingularityError):
        ppow(np.array([1.0, 0.0]), -0.1)


def test_ppow_vectorised_matches_scalar():
    w = np.array([1 + 1j, -2 + 0.5j, -3.0, 0.25j])
    values = ppow(w, 0.3)
    for wk, vk in zip(w, values):
        assert vk == ppow(complex(wk), 0.3)


@settings(deadline=None, max_examples=200)
@given(
    modulus=st.floats(min_value=0.1, max_value=10.0),
    theta=st.floats(min_value=-3.1, max_value=3.1),
    a=st.floats(min_value=-2.0, max_value=2.0),
    b=st.floats(min_value=-2.0, max_value=2.0),
)
def test_ppow_exponent_addition(modulus, theta, a, b):
    w = modulus * np.exp(1j * theta)
    lhs = ppow(w, a) * ppow(w, b)
    rhs = ppow(w, a + b)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_jacobi_midpoint_rule():
    rule = jacobi_rule(0, 0, 1)
    assert rule.nodes[0] == pytest.approx(0.5, abs=1e-15)
    assert rule.weights[0] == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("n", [4, 8, 16])
def test_jacobi_weight_sum_is_beta(n):
    q = 0.5
    rule = jacobi_rule(q - 1.0, -q, n)
    assert float(np.sum(rule.weights)) == pytest.approx(math.pi, rel=1e-13)


def test_jacobi_rule_cubic_moment():
    rule = jacobi_rule(0.25, 0, 8)
    assert rule.integrate(rule.nodes ** 3) == pytest.approx(sc.beta(4, 1.25), rel=1e-12)


@pytest.mark.parametrize("alpha,b", [(-0.5, -0.5), (-0.7, 0.3), (0.25, 0.0), (-0.3, 1.0), (0.6, -0.4)])
@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_jacobi_rule_integrates_monomials_exactly(alpha, b, n):
    rule = jacobi_rule(alpha, b, n)
    for k in range(2 * n):
        exact = sc.beta(b + k + 1.0, alpha + 1.0)
        assert rule.integrate(rule.nodes ** k) == pytest.approx(exact, rel=1e-11)


@pytest.mark.parametrize("alpha,b,n", [(-0.5, -0.5, 32), (0.9, -0.9, 48), (-0.1, 1.5, 16)])
def test_jacobi_rule_structure(alpha, b, n):
    rule = jacobi_rule(alpha, b, n)
    assert rule.n == n
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all((rule.nodes > 0) & (rule.nodes < 1))
    assert np.all(rule.weights > 0)
    assert float(np.sum(rule.weights)) == pytest.approx(sc.beta(b + 1.0, alpha + 1.0), rel=1e-12)


def test_jacobi_rule_is_shared_and_read_only():
    rule = jacobi_rule(-0.5, 0.0, 8)
    assert jacobi_rule(-0.5, 0.0, 8) is rule
    with pytest.raises(ValueError):
        rule.nodes[0] = 0.1


def test_jacobi_rule_integrates_array_valued_integrands():
    rule = jacobi_rule(0.0, 0.0, 4)
    values = rule.nodes[:, None] ** np.arange(3)[None, :]
    np.testing.assert_allclose(rule.integrate(values), [1.0, 0.5, 1.0 / 3.0], rtol=1e-14)
    assert rule.integrate(lambda t: t ** 2) == pytest.approx(1.0 / 3.0, rel=1e-14)


@pytest.mark.parametrize("alpha,b,n", [(-1.0, 0.0, 4), (0.0, -1.5, 4), (0.0, 0.0, 0)])
def test_jacobi_rule_rejects_bad_parameters(alpha, b, n):
    with pytest.raises(ValueError):
        jacobi_rule(alpha, b, n)
