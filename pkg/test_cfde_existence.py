#!/usr/bin/env python3
"""
Tests for problem instances, the compatibility check at the origin, the sup
bound M and the existence radius.
"""

import math
import os

import numpy as np
import pytest

from cfde_existence import (
    ConditionIVViolation,
    ProblemSpec,
    RadiusBranch,
    cauchy_riemann_defect,
    check_condition_iv,
    estimate_M,
    naive_invariance_bound,
    radius_R0,
)
from cfde_solver import solve
from cfde_special import gamma
from cfde_utils import load_spec_file

LINEAR_F = "z^(-q)*(t + (q/(1-q))*z)/gamma(1-q)"
DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


@pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
def test_linear_problem_passes_condition_iv(q):
    spec = ProblemSpec.from_strings(q, 1.0, f=LINEAR_F)
    report = check_condition_iv(spec)
    assert report["pass"]
    assert report["condition_iii"]
    assert report["observed_limit"] == pytest.approx(1.0 / gamma(1 - q), rel=1e-9)
    assert len(report["means"]) == 3


def test_condition_iv_failure_is_reported():
    spec = ProblemSpec.from_strings(0.5, 1.0, f="t")
    report = check_condition_iv(spec)
    assert not report["pass"]
    assert report["condition_iii"]
    assert abs(report["observed_limit"]) < 1e-3
    assert report["target"] == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-13)

    error = ConditionIVViolation(report)
    assert isinstance(error, ValueError)
    assert error.report is report
    assert "Gamma(1-q)" in str(error)


def test_singular_F_fails_condition_iii():
    # the first sample point is z = 1e-3 exactly
    spec = ProblemSpec.from_strings(0.5, 1.0, F="t/(z - 0.001)")
    report = check_condition_iv(spec)
    assert not report["condition_iii"]
    assert not report["pass"]
    assert report["error"]


@pytest.mark.parametrize("pole", ["1/z", "z^(-2)", "z^(-0.5)", "3*z^(-1) + z"])
def test_unbounded_F_fails_condition_iii(pole):
    # circle means of z^-m cancel for m not a multiple of 8; the spread does not
    spec = ProblemSpec.from_strings(0.5, 1.0, F=f"t/gamma(1-q) + {pole}")
    report = check_condition_iv(spec)
    assert not report["condition_iii"]
    assert not report["pass"]
    assert "unbounded" in report["error"]
    assert report["spreads"][-1] > report["spreads"][0] > 1.0


def test_solve_refuses_unbounded_F():
    spec = ProblemSpec.from_strings(0.5, 1.0, F="t/gamma(1-q) + 1/z")
    with pytest.raises(ConditionIVViolation, match="no limit"):
        solve(spec)


def test_condition_iv_spreads_shrink_for_analytic_F():
    spec = ProblemSpec.from_strings(0.5, 1.0, f=LINEAR_F)
    spreads = check_condition_iv(spec)["spreads"]
    assert spreads[0] > spreads[1] > spreads[2]
    assert spreads[-1] < 1e-6


def test_estimate_M_constant_modulus():
    spec = ProblemSpec.from_strings(0.5, 1.0, F="b/gamma(1-q) + z/2", R=2.0, r=1.0)
    result = estimate_M(spec)
    assert result["M"] == pytest.approx(1.0, rel=1e-12)
    z, t = result["argmax"]
    assert abs(z) == pytest.approx(2.0, rel=1e-12)
    assert abs(t - 1.0) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
def test_estimate_M_linear_problem(q):
    spec = ProblemSpec.from_strings(q, 1.0, f=LINEAR_F)
    assert estimate_M(spec)["M"] == pytest.approx(1.0 / gamma(2 - q), rel=1e-12)


def test_estimate_M_uncentred():
    spec = ProblemSpec.from_strings(0.5, 0.0, F="z*t", R=1.0, r=2.0)
    assert estimate_M(spec, centered=False)["M"] == pytest.approx(2.0, rel=1e-12)


def test_estimate_M_stable_under_grid_refinement():
    spec = ProblemSpec.from_strings(0.4, 1.0, F="b/gamma(1-q) + z*(t-b) + 0.25*z^2")
    coarse = estimate_M(spec, gridN=64)["M"]
    fine = estimate_M(spec, gridN=256)["M"]
    assert coarse == pytest.approx(1.25, abs=1e-9)
    assert coarse <= fine + 1e-9
    assert estimate_M(spec, gridN=(32, 48), threads=4)["M"] == pytest.approx(1.25, abs=1e-9)


def test_radius_R0_example():
    result = radius_R0(2, 0.5, 1, 1)
    assert result.R0 == pytest.approx(0.5641895835477563, rel=1e-14)
    assert result.branch == RadiusBranch.SHRUNK
    assert result.gamma2q == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)


def test_radius_R0_branches_meet():
    q, R, r = 0.4, 2.0, 0.5
    M_star = r / gamma(2 - q)
    assert radius_R0(M_star, q, R, r).branch == RadiusBranch.FULL
    assert radius_R0(M_star, q, R, r).R0 == R
    above = radius_R0(M_star * (1 + 1e-12), q, R, r)
    assert above.branch == RadiusBranch.SHRUNK
    assert above.R0 == pytest.approx(R, rel=1e-11)
    assert radius_R0(0.0, q, R, r).R0 == R


def test_radius_R0_monotonicity():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        q = rng.uniform(0.01, 0.99)
        M, R, r = rng.uniform(0.0, 5.0), rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0)
        base = radius_R0(M, q, R, r).R0
        assert 0 < base <= R
        assert radius_R0(M * 1.5, q, R, r).R0 <= base
        assert radius_R0(M, q, R * 1.5, r).R0 >= base
        assert radius_R0(M, q, R, r * 1.5).R0 >= base


@pytest.mark.parametrize("args", [(-1.0, 0.5, 1, 1), (1.0, 0.5, 0, 1), (1.0, 0.5, 1, -1)])
def test_radius_R0_rejects_bad_input(args):
    with pytest.raises(ValueError):
        radius_R0(*args)


def test_naive_invariance_bound():
    spec = ProblemSpec.from_strings(0.5, 0.0, F="z*t")
    report = naive_invariance_bound(spec, 1.0)
    assert report["bound"] == pytest.approx(1.7724538509055159, rel=1e-13)
    assert not report["sufficient"]
    assert naive_invariance_bound(spec, 0.5)["sufficient"]


def test_cauchy_riemann_defect():
    spec = ProblemSpec.from_strings(0.5, 1.0, f=LINEAR_F)
    assert cauchy_riemann_defect(spec) < 1e-6
    nonlinear = ProblemSpec.from_strings(0.5, 1.0, F="b/gamma(1-q) + exp(z)*t^2")
    assert cauchy_riemann_defect(nonlinear) < 1e-6


def test_from_strings_forms():
    spec = ProblemSpec.from_strings(0.5, 1.0, f=LINEAR_F, exact="b + z")
    assert spec.order == 0.5
    assert spec.b == 1 + 0j
    assert not spec.real_line
    assert spec.F(0.25, 1.0) == pytest.approx((1.0 + 0.25) / gamma(0.5), rel=1e-14)
    assert spec.exact(0.5) == pytest.approx(1.5)
    assert set(spec.describe()) == {"q", "b", "R", "r", "f", "F"}

    h = ProblemSpec.from_strings(0.5, 0.0, h="z/gamma(2-q)")
    assert h.F(0.5, 0.0) == pytest.approx(0.5 / gamma(1.5), rel=1e-14)
    assert h.exact(0.5) is None


def test_real_line_problem_is_renamed():
    spec = ProblemSpec.from_strings(0.3, 1.0, f="x^(-q)/gamma(1-q)*(y + q/(1-q)*x)", exact="b + x")
    assert spec.real_line
    assert spec.exact(0.5) == pytest.approx(1.5)
    assert spec.F(0.5, 1.0) == pytest.approx((1.0 + 0.3 / 0.7 * 0.5) / gamma(0.7), rel=1e-13)


@pytest.mark.parametrize("kwargs", [
    {},
    {"f": "t", "F": "t"},
    {"f": "x*t"},
    {"h": "z*t"},
    {"f": "t", "R": 0.0},
    {"f": "t", "r": -1.0},
])
def test_from_strings_errors(kwargs):
    with pytest.raises(ValueError):
        ProblemSpec.from_strings(0.5, 1.0, **kwargs)


def test_from_config_on_data_file():
    config = load_spec_file(os.path.join(DATA_DIR, "example_linear.json"))
    spec = ProblemSpec.from_config(config)
    assert spec.order == 0.5
    assert spec.b == 1 + 0j
    assert spec.grids["torus"] == (64, 64)
    assert spec.solver["degree"] == 4
    assert spec.exact(0.3) == pytest.approx(1.3)
    assert check_condition_iv(spec)["pass"]
