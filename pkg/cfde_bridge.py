"""
Real-line problems through their complex extension.

A real problem written in x, y is renamed to z, t, solved on the R0-disc, and
Re u is returned on [0, R0] together with the defect of the real integral
equation u(x) = (1/Gamma(q)) int_0^x f(s, u(s)) (x - s)^(q-1) ds.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from cfde_expr import has_imaginary_literal
from cfde_ops import apply_T
from cfde_solver import solve

ASYMMETRY_TOL = 1e-8


@dataclass(eq=False)
class RealSolution:
    xs: np.ndarray
    us: np.ndarray
    R0: float
    volterra_residual: float
    symmetric: bool
    defects: np.ndarray = None
    imag_max: float = 0.0
    solution: object = None

    @property
    def converged(self):
        return self.solution is not None and self.solution.converged


def bridge_solve(spec, cfg=None, n_x=101, threads=1, verbose=False):
    """
    Solve a real problem and sample Re u on [0, R0].

    Args:
        spec (ProblemSpec): Real b and real-coefficient f
        cfg (SolverConfig): Solver settings
        n_x (int): Number of uniform samples on [0, R0]

    Returns:
        RealSolution

    Raises:
        ValueError: for complex b or imaginary literals in f

    Example:
        f(x,y) = x^(-q)/gamma(1-q)*(y + q/(1-q)*x), b = 1 -> u(x) = 1 + x
    """
    if spec.b.imag != 0:
        raise ValueError(f"real-line problems need a real initial value, got b = {spec.b}")
    if has_imaginary_literal(spec.f_expr):
        raise ValueError("f has imaginary literals, its extension is not real on the real axis")
    if n_x < 2:
        raise ValueError(f"n_x must be at least 2, got {n_x}")

    sol = solve(spec, cfg, threads=threads, verbose=verbose)
    xs = np.linspace(0.0, sol.R0, n_x)
    values = sol.poly(xs + 0j)
    imag_max = float(np.max(np.abs(values.imag)))
    symmetric = imag_max <= ASYMMETRY_TOL
    if not symmetric:
        warnings.warn(f"complex solution is not real on the real axis (max |Im u| = {imag_max:.3e})")

    us = values.real.copy()
    us[0] = spec.b.real

    def real_u(s):
        return sol.poly(s).real + 0j

    n_quad = sol.config.n_quad if sol.config is not None else 48
    Tu = apply_T(spec.F, real_u, spec.q, xs + 0j, n_quad)
    defects = np.abs(us - Tu.real)

    return RealSolution(
        xs=xs,
        us=us,
        R0=sol.R0,
        volterra_residual=float(np.max(defects)),
        symmetric=symmetric,
        defects=defects,
        imag_max=imag_max,
        solution=sol,
    )
