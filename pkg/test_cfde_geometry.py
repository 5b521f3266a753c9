#!/usr/bin/env python3
"""
Tests for the univalence and starlikeness certificates.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cfde_geometry import (
    INCONCLUSIVE,
    MOCANU_BOUND,
    PROVEN,
    check_h_hypotheses,
    check_starlike_mocanu,
    check_univalent,
    classify,
    disc_derivative,
    starlike_bound_from_h,
    u_from_h,
    u_prime_from_h,
    unit_disc_grid,
)
from cfde_ops import PowerSeries
from cfde_special import gamma


def linear_h(q):
    return lambda w: np.asarray(w, dtype=complex) / gamma(2 - q)


def test_mocanu_constant():
    assert MOCANU_BOUND == pytest.approx(np.sqrt(20) / 5, rel=1e-15)


def test_unit_disc_grids():
    open_grid = unit_disc_grid((4, 8))
    closed_grid = unit_disc_grid((4, 8), closed=True)
    assert len(open_grid) == len(closed_grid) == 1 + 32
    assert open_grid[0] == 0
    assert np.max(np.abs(open_grid)) == pytest.approx(1 - 1e-3, rel=1e-14)
    assert np.max(np.abs(closed_grid)) == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
def test_linear_h_gives_identity(q):
    report = classify(linear_h(q), q, hprime=lambda w: 1 / gamma(2 - q) + 0 * w)
    assert report.univalent == PROVEN
    assert report.starlike == PROVEN
    assert report.sup_uprime_dev <= 1e-12
    assert report.sup_u_minus_z <= 1e-12
    assert report.beta == pytest.approx(0.0, abs=1e-6)

    data = report.to_dict()
    assert data["matches_1_over_gamma2q"]
    assert data["starlike_M"] <= 1e-12
    assert data["starlike_M_sufficient"]
    assert data["h_prime_univalent"] == PROVEN
    assert data["mocanu_bound_form"] == "sqrt(20)/5"


@pytest.mark.parametrize("eps, sufficient", [(0.3, True), (0.6, False)])
def test_starlike_M_of_quadratic_perturbation(eps, sufficient):
    q = 0.5

    def h(w):
        return w / gamma(2 - q) + eps * w ** 2

    checks = check_h_hypotheses(h, q, hprime=lambda w: 1 / gamma(2 - q) + 2 * eps * w, grid=(8, 16))
    assert checks["matches_1_over_gamma2q"]
    assert checks["starlike_M"] == pytest.approx(eps * gamma(1 - q), rel=1e-12)
    assert checks["starlike_M_sufficient"] is sufficient


def test_classify_without_explicit_derivative():
    q = 0.5
    report = classify(linear_h(q), q, grid=(8, 16))
    assert report.univalent == PROVEN
    assert report.starlike == PROVEN
    assert report.h_checks["matches_1_over_gamma2q"]
    assert report.sup_uprime_dev <= 1e-9


def test_mocanu_certificate():
    proven = check_starlike_mocanu(PowerSeries([0.0, 1.0, 0.4]))
    assert proven["proven"] == PROVEN
    assert proven["sup_uprime_dev"] == pytest.approx(0.8, rel=1e-12)

    edge = check_starlike_mocanu(PowerSeries([0.0, 1.0, 0.5]))
    assert edge["proven"] == INCONCLUSIVE
    assert edge["sup_uprime_dev"] == pytest.approx(1.0, rel=1e-12)

    callable_check = check_starlike_mocanu(lambda w: w + 0.4 * w ** 2)
    assert callable_check["proven"] == PROVEN
    assert callable_check["sup_uprime_dev"] == pytest.approx(0.8 * (1 - 1e-3), rel=1e-9)


def test_univalence_certificate_on_linear_derivative():
    points = unit_disc_grid()
    report = check_univalent(1 + 0.9 * points)
    assert report["proven"] == PROVEN
    assert abs(report["beta"]) < 1e-3
    assert report["min_re_rotated"] == pytest.approx(1 - 0.9 * (1 - 1e-3), abs=1e-9)


def test_rotated_derivative_finds_its_angle():
    points = unit_disc_grid()
    report = check_univalent(np.exp(-1j) * (1 + 0.5 * points))
    assert report["proven"] == PROVEN
    assert report["beta"] == pytest.approx(1.0, abs=1e-3)


def test_koebe_derivative_is_inconclusive():
    # univalent, but the certificate is only sufficient
    points = unit_disc_grid()
    report = check_univalent((1 + points) / (1 - points) ** 3)
    assert report["proven"] == INCONCLUSIVE


def test_zero_h():
    def h(w):
        return 0 * np.asarray(w, dtype=complex)

    report = classify(h, 0.5, grid=(8, 16))
    assert report.univalent == INCONCLUSIVE
    assert report.beta is None
    assert report.starlike == INCONCLUSIVE
    assert report.sup_u_minus_z == pytest.approx(1.0, rel=1e-12)
    assert not report.h_checks["matches_1_over_gamma2q"]
    assert report.h_checks["h_prime_univalent"] == INCONCLUSIVE
    assert starlike_bound_from_h(h, 0.5) == pytest.approx(1.0, rel=1e-12)


def test_h_must_vanish_at_the_origin():
    with pytest.raises(ValueError):
        check_h_hypotheses(lambda w: 1 + w, 0.5)
    with pytest.raises(ValueError):
        classify(lambda w: 1 + w, 0.5)


@settings(deadline=None, max_examples=100)
@given(
    c2=st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False),
    c3=st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False),
    q=st.floats(min_value=0.1, max_value=0.9),
)
def test_starlike_bound_chain(c2, c3, q):
    def h(w):
        return w / gamma(2 - q) + c2 * w ** 2 + c3 * w ** 3

    def hprime(w):
        return 1 / gamma(2 - q) + 2 * c2 * w + 3 * c3 * w ** 2

    grid = (8, 64)
    sup_u = starlike_bound_from_h(h, q, grid=grid)
    starlike_M = check_h_hypotheses(h, q, hprime=hprime, grid=grid)["starlike_M"]
    assert sup_u <= starlike_M + 1e-12


@pytest.mark.parametrize("q", [0.2, 0.5, 0.8])
def test_u_prime_at_origin(q):
    value = u_prime_from_h(lambda w: 1 / gamma(2 - q) + 0.7 * w, q, 0j)
    assert value == pytest.approx(1.0, abs=1e-10)


def test_u_from_h_is_linear():
    q = 0.4
    z = unit_disc_grid((4, 8), closed=True)

    def h1(w):
        return w + 0.5j * w ** 2

    def h2(w):
        return np.exp(w) - 1

    a, b = 0.3 - 1.2j, 2.0
    combined = u_from_h(lambda w: a * h1(w) + b * h2(w), q, z)
    np.testing.assert_allclose(combined, a * u_from_h(h1, q, z) + b * u_from_h(h2, q, z), atol=1e-13)


def test_u_from_h_on_a_monomial():
    q, z = 0.5, 0.6 - 0.2j
    # h = z^2 gives u = Gamma(3-q)/Gamma(3) z^2
    assert u_from_h(lambda w: w ** 2, q, z) == pytest.approx(gamma(3 - q) / 2 * z ** 2, rel=1e-13)


def test_disc_derivative_matches_series_derivative():
    u = PowerSeries([0.0, 1.0, 0.3, -0.2j])
    points = unit_disc_grid((8, 16))
    np.testing.assert_allclose(disc_derivative(u, points), u.derivative()(points), atol=1e-9)
