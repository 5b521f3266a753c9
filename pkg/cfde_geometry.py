"""
Univalence and starlikeness certificates for the family f(z, t) = z^(-q) h(z).

The solution there is u(z) = (1/Gamma(q)) int_0^1 t^(-q) (1-t)^(q-1) h(z t) dt.
Both certificates are sufficient conditions evaluated on grids: a function is
reported "proven" or "inconclusive", never "not univalent".
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from cfde_ops import PowerSeries, as_order, cauchy_derivative, sample
from cfde_special import gamma, jacobi_rule

PROVEN = "proven"
INCONCLUSIVE = "inconclusive"

# sqrt(20)/5
MOCANU_BOUND = 2.0 / math.sqrt(5.0)

OPEN_DISC_CAP = 1.0 - 1e-3
DEFAULT_DISC_GRID = (32, 64)
N_BETA = 720


@dataclass
class ClassificationReport:
    univalent: str
    beta: float
    min_re_rotated: float
    starlike: str
    sup_uprime_dev: float
    mocanu_bound: float = MOCANU_BOUND
    h_checks: dict = field(default_factory=dict)
    sup_u_minus_z: float = None

    def to_dict(self):
        return {
            "univalent": self.univalent,
            "beta": self.beta,
            "min_re_rotated": self.min_re_rotated,
            "starlike": self.starlike,
            "sup_uprime_dev": self.sup_uprime_dev,
            "mocanu_bound": self.mocanu_bound,
            "mocanu_bound_form": "sqrt(20)/5",
            "sup_u_minus_z": self.sup_u_minus_z,
            **self.h_checks,
        }


def unit_disc_grid(grid=DEFAULT_DISC_GRID, closed=False):
    """
    Polar grid of the unit disc including the centre.

    The open grid stops at radius 1 - 1e-3; the closed grid reaches |z| = 1.
    """
    n_rad, n_ang = grid
    cap = 1.0 if closed else OPEN_DISC_CAP
    radii = cap * np.arange(1, n_rad + 1) / n_rad
    roots = np.exp(2j * np.pi * np.arange(n_ang) / n_ang)
    return np.concatenate([[0j], (radii[:, None] * roots[None, :]).ravel()])


def disc_derivative(fn, z):
    """Cauchy derivative on a circle of radius min(0.1, 1 - |z|), floored at 1e-3."""
    z = np.asarray(z, dtype=complex)
    radius = np.clip(1.0 - np.abs(z), 1e-3, 0.1)
    return cauchy_derivative(fn, z, radius)


def u_prime_from_h(hprime, q, z, n=32):
    """
    u'(z) = (1/Gamma(q)) int_0^1 t^(1-q) (1-t)^(q-1) h'(z t) dt

    Example:
        hprime = 1/Gamma(2-q) -> u'(z) = 1
    """
    q = as_order(q)
    rule = jacobi_rule(q - 1.0, 1.0 - q, n)
    z_arr = np.asarray(z, dtype=complex)
    values = sample(hprime, z_arr[..., None] * rule.nodes)
    result = rule.integrate(np.moveaxis(values, -1, 0)) / gamma(q)
    if np.ndim(z) == 0:
        return complex(result)
    return result


def u_from_h(h, q, z, n=32):
    """u(z) = (1/Gamma(q)) int_0^1 t^(-q) (1-t)^(q-1) h(z t) dt."""
    q = as_order(q)
    rule = jacobi_rule(q - 1.0, -q, n)
    z_arr = np.asarray(z, dtype=complex)
    values = sample(h, z_arr[..., None] * rule.nodes)
    result = rule.integrate(np.moveaxis(values, -1, 0)) / gamma(q)
    if np.ndim(z) == 0:
        return complex(result)
    return result


def check_univalent(uprime_values, tol=1e-12, n_beta=N_BETA):
    """
    Noshiro-Warschawski certificate on samples of u'.

    Searches beta over an n_beta grid in (-pi, pi], refines the best one, and
    proves univalence when min Re(e^(i beta) u') > tol.

    Returns:
        dict: proven ("proven"/"inconclusive"), beta, min_re_rotated

    Example:
        u'(z) = 1 + 0.9 z on the open disc -> proven, beta 0, min_re ~ 0.1
    """
    values = np.asarray(uprime_values, dtype=complex).ravel()
    betas = np.pi * (2.0 * np.arange(n_beta) - n_beta) / n_beta + 2.0 * np.pi / n_beta

    def min_re(beta):
        return float(np.min((np.exp(1j * beta) * values).real))

    mins = np.array([min_re(beta) for beta in betas])
    k = int(np.argmax(mins))
    best_beta, best = float(betas[k]), float(mins[k])

    h = 2.0 * np.pi / n_beta
    res = minimize_scalar(lambda beta: -min_re(beta), bounds=(best_beta - h, best_beta + h),
                          method="bounded", options={"xatol": 1e-12})
    if -res.fun > best:
        best_beta, best = float(res.x), -float(res.fun)

    return {
        "proven": PROVEN if best > tol else INCONCLUSIVE,
        "beta": best_beta,
        "min_re_rotated": best,
    }


def check_starlike_mocanu(u, grid=None, tol=1e-12):
    """
    Starlikeness from sup |u'(z) - 1| <= sqrt(20)/5.

    A PowerSeries is differentiated term by term on the closed disc; other
    callables use the Cauchy derivative on the open disc.

    Returns:
        dict: proven, sup_uprime_dev

    Example:
        u = z + 0.4 z^2 -> sup 0.8, proven
        u = z + 0.5 z^2 -> sup 1.0, inconclusive
    """
    if isinstance(u, PowerSeries):
        points = unit_disc_grid(closed=True) if grid is None else np.asarray(grid, dtype=complex)
        uprime = u.derivative()(points)
    else:
        points = unit_disc_grid() if grid is None else np.asarray(grid, dtype=complex)
        uprime = disc_derivative(u, points)
    dev = float(np.max(np.abs(uprime - 1.0)))
    return {"proven": PROVEN if dev <= MOCANU_BOUND + tol else INCONCLUSIVE, "sup_uprime_dev": dev}


def check_h_hypotheses(h, q, hprime=None, grid=DEFAULT_DISC_GRID, tol=1e-10):
    """
    Hypotheses on h for both certificates.

    Reports h'(0) against 1/Gamma(2-q), the Noshiro-Warschawski certificate of
    h', and sup over the closed disc of |Gamma(1-q) h(z) - z/(1-q)| against
    sqrt(20)/5.

    Raises:
        ValueError: when h(0) != 0
    """
    q = as_order(q)
    h0 = complex(np.asarray(sample(h, np.array([0j])))[0])
    if abs(h0) > tol:
        raise ValueError(f"h(0) must vanish, got h(0) = {h0}")

    hprime_at_0 = complex(np.asarray(hprime(0j)) if hprime is not None else cauchy_derivative(h, 0j))
    target = 1.0 / gamma(2.0 - q)
    open_pts = unit_disc_grid(grid)
    hp = sample(hprime, open_pts) if hprime is not None else disc_derivative(h, open_pts)
    nw = check_univalent(hp)

    closed_pts = unit_disc_grid(grid, closed=True)
    starlike_M = float(np.max(np.abs(gamma(1.0 - q) * sample(h, closed_pts) - closed_pts / (1.0 - q))))
    return {
        "h_prime_at_0": hprime_at_0,
        "matches_1_over_gamma2q": bool(abs(hprime_at_0 - target) <= tol * max(1.0, target)),
        "h_prime_univalent": nw["proven"],
        "starlike_M": starlike_M,
        "starlike_M_sufficient": bool(starlike_M <= MOCANU_BOUND),
    }


def starlike_bound_from_h(h, q, grid=DEFAULT_DISC_GRID, n=32):
    """
    sup over the closed-disc grid of |u(z) - z| for the solution built from h.

    It never exceeds sup |Gamma(1-q) h(z) - z/(1-q)|.

    Example:
        h = z/Gamma(2-q) -> 0
        h = 0            -> 1
    """
    points = unit_disc_grid(grid, closed=True)
    return float(np.max(np.abs(u_from_h(h, q, points, n) - points)))


def classify(h, q, hprime=None, grid=DEFAULT_DISC_GRID, n=32):
    """
    Full classification of the solution for f = z^(-q) h(z).

    Args:
        h (callable): h, vectorised, with h(0) = 0
        q (FracOrder or float): Order in (0, 1)
        hprime (callable): h', Cauchy derivative when omitted
        grid (tuple): (radii, angles) of the unit-disc grids
        n (int): Quadrature nodes

    Returns:
        ClassificationReport
    """
    h_checks = check_h_hypotheses(h, q, hprime=hprime, grid=grid)
    points = unit_disc_grid(grid)
    if hprime is None:
        def hprime(w):
            return disc_derivative(h, w)
    uprime = u_prime_from_h(hprime, q, points, n)

    nw = check_univalent(uprime)
    dev = float(np.max(np.abs(uprime - 1.0)))
    return ClassificationReport(
        univalent=nw["proven"],
        beta=nw["beta"] if nw["proven"] == PROVEN else None,
        min_re_rotated=nw["min_re_rotated"],
        starlike=PROVEN if dev <= MOCANU_BOUND else INCONCLUSIVE,
        sup_uprime_dev=dev,
        h_checks=h_checks,
        sup_u_minus_z=starlike_bound_from_h(h, q, grid, n),
    )
