"""
Sampling verifiers for the one- and two-variable Schwarz bounds.

For g analytic on the bidisc |z| <= R, |t - b| <= r with g(0, b) = 0 and
|g| <= M, the two-variable bound reads

    |g(z, t)| <= M max(|z|/R, |t - b|/r)
"""

from dataclasses import dataclass

import numpy as np

from cfde_ops import sample, sample2
from cfde_utils import map_points

DEFAULT_SCHWARZ_GRID = (24, 48)
PRECONDITION_TOL = 1e-12


@dataclass(frozen=True)
class BidiscSpec:
    R: float
    r: float
    b: complex = 0j

    def __post_init__(self):
        if not (self.R > 0 and self.r > 0):
            raise ValueError(f"bidisc radii must be positive, got R={self.R}, r={self.r}")
        object.__setattr__(self, "b", complex(self.b))


@dataclass(frozen=True)
class SchwarzReport:
    checked: int
    worst_ratio: float
    worst_point: tuple
    passed: bool
    hypothesis_violation: bool
    g_at_center: complex
    grid: tuple

    def to_dict(self):
        return {
            "checked": self.checked,
            "worst_ratio": self.worst_ratio,
            "worst_point": self.worst_point,
            "pass": self.passed,
            "hypothesis_violation": self.hypothesis_violation,
            "g_at_center": self.g_at_center,
            "grid": f"{self.grid[0]}x{self.grid[1]}",
        }


def slice_map(xi1, xi2, eta, spec, tol=PRECONDITION_TOL):
    """
    The complex line through (0, b) and a torus point (xi1, xi2).

    Phi(eta) = (xi1 eta/R, (xi2 - b) eta/R + b)

    Example:
        slice_map(2j, 1, 1, BidiscSpec(R=2, r=1, b=0)) -> (1j, 0.5)
    """
    scale = max(1.0, spec.R)
    if abs(abs(xi1) - spec.R) > tol * scale:
        raise ValueError(f"xi1 must lie on |z| = R = {spec.R}, got |xi1| = {abs(xi1)}")
    if abs(abs(xi2 - spec.b) - spec.r) > tol * max(1.0, spec.r):
        raise ValueError(f"xi2 must lie on |t - b| = r = {spec.r}, got {abs(xi2 - spec.b)}")
    if np.any(np.abs(eta) > spec.R * (1.0 + tol)):
        raise ValueError(f"eta must lie in |eta| <= R = {spec.R}")
    eta = np.asarray(eta, dtype=complex) if np.ndim(eta) else complex(eta)
    return xi1 * eta / spec.R, (xi2 - spec.b) * eta / spec.R + spec.b


def slice_quotient(g, xi1, xi2, eta, spec, n_mean=64):
    """
    psi(eta) = g(Phi(eta))/eta, extended to eta = 0 by its circle mean.

    |psi| <= M/R on |eta| = R whenever |g| <= M on the bidisc.
    """
    def psi(e):
        z, t = slice_map(xi1, xi2, e, spec)
        return sample2(g, z, t) / e

    eta_arr = np.asarray(eta, dtype=complex)
    at_zero = eta_arr == 0
    circle = 0.5 * spec.R * np.exp(2j * np.pi * np.arange(n_mean) / n_mean)
    center = complex(np.mean(psi(circle)))
    safe = np.where(at_zero, 0.5 * spec.R, eta_arr)
    result = np.where(at_zero, center, psi(safe))
    if np.ndim(eta) == 0:
        return complex(result)
    return result


def bidisc_grid(spec, grid=DEFAULT_SCHWARZ_GRID):
    """
    Product grid: radii R i/n (i = 1..n) and the centre, times n_ang angles,
    in each factor. Returns flattened (z, t) arrays.
    """
    n_rad, n_ang = grid
    radii = np.arange(1, n_rad + 1) / n_rad
    roots = np.exp(2j * np.pi * np.arange(n_ang) / n_ang)
    unit = np.concatenate([[0j], (radii[:, None] * roots[None, :]).ravel()])
    z, t = np.meshgrid(spec.R * unit, spec.b + spec.r * unit, indexing="ij")
    return z.ravel(), t.ravel()


def schwarz2_check(g, M, spec, grid=DEFAULT_SCHWARZ_GRID, tol=1e-9, threads=1):
    """
    Sample the two-variable Schwarz bound on a product grid.

    Args:
        g (callable): g(z, t), vectorised
        M (float): Claimed sup of |g| on the bidisc
        spec (BidiscSpec): Radii and centre
        grid (tuple): (radii, angles) per factor
        tol (float): Allowed excess of the ratio over 1, and of |g(0, b)| over 0

    Returns:
        SchwarzReport: worst ratio |g|/(M max(|z|/R, |t-b|/r)) and its point;
        hypothesis_violation flags g(0, b) != 0

    Example:
        schwarz2_check(lambda z, t: M*z/R, M, spec).worst_ratio -> 1.0
    """
    if not M > 0:
        raise ValueError(f"M must be positive, got {M}")
    z, t = bidisc_grid(spec, grid)

    g0 = complex(np.asarray(sample2(g, np.array([0j]), np.array([spec.b])))[0])

    def ratio(zs, ts):
        bound = M * np.maximum(np.abs(zs) / spec.R, np.abs(ts - spec.b) / spec.r)
        values = np.abs(sample2(g, zs, ts))
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(bound > 0, values / np.where(bound > 0, bound, 1.0), 0.0)

    ratios = map_points(ratio, z, t, threads=threads)
    k = int(np.argmax(ratios))
    worst = float(ratios[k])
    return SchwarzReport(
        checked=int(z.size),
        worst_ratio=worst,
        worst_point=(complex(z[k]), complex(t[k])),
        passed=bool(worst <= 1.0 + tol),
        hypothesis_violation=bool(abs(g0) > tol),
        g_at_center=g0,
        grid=tuple(grid),
    )


def schwarz1_bound(u, b, r, R, z):
    """
    Slack r|z|/R - |u(z) - b| of the one-variable Schwarz bound.

    Example:
        u(z) = b + r (z/R)^2 at z = R/2 -> r/4
    """
    z_arr = np.asarray(z, dtype=complex)
    slack = r * np.abs(z_arr) / R - np.abs(sample(u, z_arr) - b)
    if np.ndim(z) == 0:
        return float(slack)
    return slack
