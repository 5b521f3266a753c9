"""
Picard iteration for the fixed point of T on polynomials over the R0-disc.

Iterates are degree-N polynomials with the constant term pinned to b. Each
step evaluates T u at collocation nodes z = rho_m e^(i theta_j) and fits the
next iterate by least squares in the scaled variable w = z/R0.
"""

from dataclasses import asdict, dataclass, field, fields

import numpy as np
from scipy.linalg import solve_triangular

from cfde_existence import ConditionIVViolation, check_condition_iv, estimate_M, radius_R0
from cfde_log import diag
from cfde_ops import PowerSeries, apply_T, sample
from cfde_utils import SpecFileError, env_default, map_points

DEFAULT_TORUS_GRID = 64


@dataclass(frozen=True)
class SolverConfig:
    degree: int = 24
    n_theta: int = 16
    n_rad: int = 12
    n_quad: int = 48
    tol: float = 1e-10
    max_iter: int = 200
    damping: float = 1.0

    def __post_init__(self):
        for name in ("degree", "n_theta", "n_rad", "n_quad", "max_iter"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise SpecFileError(f"solver setting '{name}' must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.degree < 0 or self.n_theta < 1 or self.n_rad < 1 or self.n_quad < 1 or self.max_iter < 1:
            raise SpecFileError("solver sizes must be positive")
        if self.n_theta * self.n_rad < self.degree + 1:
            raise SpecFileError(
                f"n_theta*n_rad = {self.n_theta * self.n_rad} collocation nodes cannot fit degree {self.degree}"
            )
        if not self.tol > 0:
            raise SpecFileError(f"tol must be positive, got {self.tol}")
        if not 0 < self.damping <= 1:
            raise SpecFileError(f"damping must lie in (0, 1], got {self.damping}")

    @classmethod
    def resolve(cls, spec_settings=None, overrides=None):
        """
        Settings with precedence overrides > spec file > CFDE_* environment > defaults.

        Example:
            SolverConfig.resolve({"degree": 8}, {"tol": 1e-12})
        """
        values = {f.name: env_default(f.name) for f in fields(cls)}
        for source in (spec_settings or {}, overrides or {}):
            values.update({k: v for k, v in source.items() if v is not None and k in values})
        return cls(**values)


def unit_roots(n):
    """
    n-th roots of unity, exactly conjugate-symmetric: e_(n-j) = conj(e_j).
    """
    j = np.arange(n // 2 + 1)
    half = np.exp(2j * np.pi * j / n)
    if n % 2 == 0:
        half[-1] = -1.0 + 0j
        return np.concatenate([half, np.conj(half[-2:0:-1])])
    return np.concatenate([half, np.conj(half[:0:-1])])


def collocation_nodes(R0, n_theta, n_rad):
    """
    Nodes rho_m e^(2 pi i j/n_theta) with rho_m = R0 (1 - cos((m+1) pi/n_rad))/2.

    The outermost radius is R0 and the node set is closed under conjugation.
    """
    m = np.arange(n_rad)
    rho = R0 * (1.0 - np.cos((m + 1) * np.pi / n_rad)) / 2.0
    return (rho[:, None] * unit_roots(n_theta)[None, :]).ravel()


def verification_grid(R0, n_theta, n_rad):
    """
    Residual grid: angles pi(2j+1)/(2 n_theta) for 2 n_theta directions,
    radii R0 k/(2 n_rad) for k = 1..2 n_rad, plus the centre.
    """
    angles = np.pi * (2.0 * np.arange(2 * n_theta) + 1.0) / (2.0 * n_theta)
    radii = R0 * np.arange(1, 2 * n_rad + 1) / (2.0 * n_rad)
    grid = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    return np.concatenate([[0j], grid])


class PolynomialFit:
    """
    Least-squares fit of sum_{n=1}^N a_n z^n to data minus a pinned constant.

    The Vandermonde matrix in w = z/R0 is factorised once with QR.
    """

    def __init__(self, nodes, degree, R0):
        self.degree = degree
        self.R0 = R0
        if degree > 0:
            w = np.asarray(nodes, dtype=complex) / R0
            vander = w[:, None] ** np.arange(1, degree + 1)[None, :]
            self.Q, self.Rm = np.linalg.qr(vander)
            self.scale = R0 ** np.arange(1, degree + 1, dtype=float)

    def coefficients(self, values, constant):
        coeffs = np.zeros(self.degree + 1, dtype=complex)
        coeffs[0] = constant
        if self.degree > 0:
            rhs = self.Q.conj().T @ (np.asarray(values, dtype=complex) - constant)
            coeffs[1:] = solve_triangular(self.Rm, rhs) / self.scale
        return coeffs


@dataclass(eq=False)
class Solution:
    poly: PowerSeries
    R0: float
    grid: list
    iterations: int
    residual: float
    converged: bool
    status: str = ""
    M: float = 0.0
    branch: str = ""
    history: list = field(default_factory=list)
    error_history: list = field(default_factory=list)
    max_error: float = None
    config: SolverConfig = None
    problem: dict = field(default_factory=dict)

    def __call__(self, z):
        return self.poly(z)

    def to_report(self):
        """Report object: problem data, radius, coefficients as (re, im) pairs and diagnostics."""
        report = dict(self.problem)
        report.update({
            "M": self.M,
            "R0": self.R0,
            "branch": self.branch,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "status": self.status,
            "max_error": self.max_error,
            "coefficients": [[c.real, c.imag] for c in self.poly.coeffs],
            "grid": [[z.real, z.imag, u.real, u.imag] for z, u in self.grid],
        })
        if self.config is not None:
            report["solver"] = asdict(self.config)
        return report


def residual(u, spec, grid, n_quad=48, threads=1):
    """
    max over grid of |u(z) - T u(z)|, the defect of the integral equation.

    Example:
        u = 1 + z for the linear example -> residual ~ 1e-15
    """
    grid = np.asarray(grid, dtype=complex)
    q = spec.order

    def defect(z):
        return np.abs(sample(u, z) - apply_T(spec.F, u, q, z, n_quad))

    return float(np.max(map_points(defect, grid, threads=threads)))


def ball_invariance_check(spec, u, grid, n_quad=48, tol=1e-8, threads=1):
    """
    sup over grid of |T u(z) - b|, passing when it stays within r + tol.

    Returns:
        dict: max_dev, pass, u_max_dev (sup |u - b|, the precondition)
    """
    grid = np.asarray(grid, dtype=complex)
    q = spec.order
    dev = map_points(lambda z: np.abs(apply_T(spec.F, u, q, z, n_quad) - spec.b), grid, threads=threads)
    max_dev = float(np.max(dev))
    return {
        "max_dev": max_dev,
        "pass": bool(max_dev <= spec.r + tol),
        "u_max_dev": float(np.max(np.abs(sample(u, grid) - spec.b))),
    }


def solve(spec, cfg=None, threads=1, verbose=False, M=None):
    """
    Fixed point of T on the existence disc by Picard iteration.

    Args:
        spec (ProblemSpec): Problem instance
        cfg (SolverConfig): Solver settings, resolved from spec/env when None
        threads (int): Worker threads for node evaluations
        verbose (bool): Per-iteration diagnostics on stderr
        M (float): Sup bound, estimated on the torus when None

    Returns:
        Solution: converged=False with the best iterate when the iteration stalls

    Raises:
        ConditionIVViolation: when F(0, b) != b/Gamma(1-q)
    """
    cfg = cfg or SolverConfig.resolve(spec.solver)
    q = spec.order
    b = spec.b

    iv = check_condition_iv(spec)
    if not iv["pass"]:
        raise ConditionIVViolation(iv)

    if M is None:
        torus = spec.grids.get("torus", (DEFAULT_TORUS_GRID, DEFAULT_TORUS_GRID))
        M = estimate_M(spec, gridN=torus, threads=threads)["M"]
    radius = radius_R0(M, spec.q, spec.R, spec.r)
    R0 = radius.R0
    diag(f"M = {M:.12g}, R0 = {R0:.12g} ({radius.branch.value})", verbose)

    nodes = collocation_nodes(R0, cfg.n_theta, cfg.n_rad)
    fit = PolynomialFit(nodes, cfg.degree, R0)
    exact_nodes = spec.exact(nodes) if spec.exact_expr is not None else None

    coeffs = np.zeros(cfg.degree + 1, dtype=complex)
    coeffs[0] = b
    u = PowerSeries(coeffs, R0)
    u_nodes = u(nodes)

    history = []
    error_history = []
    best_change, best_coeffs = np.inf, coeffs
    change = np.inf
    status = "max_iter"
    iterations = 0

    for k in range(1, cfg.max_iter + 1):
        iterations = k
        Tu = map_points(lambda z: apply_T(spec.F, u, q, z, cfg.n_quad), nodes, threads=threads)
        fitted = fit.coefficients(Tu, b)
        coeffs = (1.0 - cfg.damping) * coeffs + cfg.damping * fitted
        coeffs[0] = b
        u = PowerSeries(coeffs, R0)
        new_nodes = u(nodes)

        change = float(np.max(np.abs(new_nodes - u_nodes)))
        u_nodes = new_nodes
        history.append(change)
        if exact_nodes is not None:
            error_history.append(float(np.max(np.abs(u_nodes - exact_nodes))))
        diag(f"iteration {k}: sup node change {change:.3e}", verbose)

        if not np.isfinite(change):
            status = "diverged"
            break
        if change < best_change:
            best_change, best_coeffs = change, coeffs.copy()
        if change <= cfg.tol:
            status = "stopped"
            break

    if status != "stopped":
        u = PowerSeries(best_coeffs, R0)

    vgrid = verification_grid(R0, *spec.grids.get("verify", (cfg.n_theta, cfg.n_rad)))
    res = residual(u, spec, vgrid, cfg.n_quad, threads)
    converged = status == "stopped" and res <= 10.0 * cfg.tol
    if status == "stopped":
        status = "converged" if converged else "residual"
    diag(f"residual {res:.3e}, status {status}", verbose)

    max_error = None
    if spec.exact_expr is not None:
        max_error = float(np.max(np.abs(u(vgrid) - spec.exact(vgrid))))

    return Solution(
        poly=u,
        R0=R0,
        grid=list(zip(vgrid, u(vgrid))),
        iterations=iterations,
        residual=res,
        converged=converged,
        status=status,
        M=M,
        branch=radius.branch.value,
        history=history,
        error_history=error_history,
        max_error=max_error,
        config=cfg,
        problem=spec.describe(),
    )
