"""
Problem instances, compatibility checks, the sup bound M and the existence radius.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar

from cfde_expr import BinOp, Neg, Var, evaluate, free_names, parse, rename, times_z_q, to_text
from cfde_ops import FracOrder, as_order
from cfde_special import SingularityError, gamma
from cfde_utils import map_points, validate_spec

CONDITION_IV_RADII = (1e-3, 1e-5, 1e-7)
CONDITION_IV_ANGLES = 8
DEFAULT_IV_TOL = 1e-6


class ConditionIVViolation(ValueError):
    """F(0, b) does not match b/Gamma(1-q); the problem admits no analytic solution with u(0) = b."""

    def __init__(self, report):
        self.report = report
        if not report.get("condition_iii", True):
            super().__init__(f"z^q f(z,b) has no limit at z = 0: {report['error']}")
            return
        super().__init__(
            f"z^q f(z,b) tends to {report['observed_limit']:.12g} at z = 0, "
            f"expected b/Gamma(1-q) = {report['target']:.12g}"
        )


def _z_power(exponent_node):
    return BinOp("^", Var("z"), exponent_node)


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """
    One instance of the initial value problem D^q u = f(z, u), u(0) = b.

    F_expr is the product z^q f(z, t), derived symbolically from f_expr.
    real_line is set when f was written in x, y and renamed to z, t.
    """
    q: FracOrder
    b: complex
    f_expr: object
    F_expr: object
    R: float
    r: float
    real_line: bool = False
    exact_expr: object = None
    description: str = ""
    solver: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.R > 0 and self.r > 0):
            raise ValueError(f"R and r must be positive, got R={self.R}, r={self.r}")
        names = free_names(self.F_expr)
        extra = names - {"z", "t", "q", "b"}
        if extra:
            raise ValueError(f"F may depend on z, t, q, b only, found {', '.join(sorted(extra))}")

    @property
    def order(self):
        return self.q.q

    @property
    def target(self):
        """b/Gamma(1-q), the value F(0, b) must take."""
        return self.b / gamma(1.0 - self.order)

    def env(self, z, t):
        return {"z": z, "t": t, "q": self.order, "b": self.b}

    def F(self, z, t):
        """F(z, t) = z^q f(z, t), vectorised."""
        return evaluate(self.F_expr, self.env(z, t))

    def f(self, z, t):
        return evaluate(self.f_expr, self.env(z, t))

    def exact(self, z):
        if self.exact_expr is None:
            return None
        return evaluate(self.exact_expr, self.env(z, 0j))

    @classmethod
    def from_strings(cls, q, b, f=None, F=None, h=None, R=1.0, r=1.0, exact=None, description="",
                     solver=None, grids=None):
        """
        Build a spec from expression text; exactly one of f, F, h.

        f in x, y is treated as a real-line problem and renamed to z, t.
        h gives the family f = z^(-q) h(z), with F = h.

        Example:
            ProblemSpec.from_strings(0.5, 1, f="z^(-q)*(t + (q/(1-q))*z)/gamma(1-q)")
        """
        forms = [name for name, value in (("f", f), ("F", F), ("h", h)) if value is not None]
        if len(forms) != 1:
            raise ValueError("exactly one of f, F, h is required")
        form = forms[0]
        ast = parse({"f": f, "F": F, "h": h}[form])

        real_line = bool(free_names(ast) & {"x", "y"})
        if real_line:
            if free_names(ast) & {"z", "t"}:
                raise ValueError("an expression may use x, y or z, t but not both")
            ast = rename(ast, {"x": "z", "y": "t"})

        minus_q = _z_power(Neg(Var("q")))
        if form == "f":
            f_expr, F_expr = ast, times_z_q(ast)
        elif form == "F":
            f_expr, F_expr = BinOp("*", minus_q, ast), ast
        else:
            if "t" in free_names(ast):
                raise ValueError("h may depend on z only")
            f_expr, F_expr = BinOp("*", minus_q, ast), ast

        exact_expr = None
        if exact is not None:
            exact_expr = parse(exact)
            if free_names(exact_expr) & {"x"}:
                exact_expr = rename(exact_expr, {"x": "z"})

        return cls(
            q=FracOrder(q), b=complex(b), f_expr=f_expr, F_expr=F_expr, R=float(R), r=float(r),
            real_line=real_line, exact_expr=exact_expr, description=description,
            solver=dict(solver or {}), grids=dict(grids or {}),
        )

    @classmethod
    def from_config(cls, config):
        """Build a spec from a (raw or validated) spec-file dictionary."""
        if "form" not in config:
            config = validate_spec(config)
        kwargs = {config["form"]: config["expr"]}
        return cls.from_strings(
            config["q"], config["b"], R=config["R"], r=config["r"], exact=config.get("exact"),
            description=config.get("description", ""), solver=config.get("solver"),
            grids=config.get("grids"), **kwargs,
        )

    def describe(self):
        return {
            "q": self.order,
            "b": self.b,
            "R": self.R,
            "r": self.r,
            "f": to_text(self.f_expr),
            "F": to_text(self.F_expr),
        }


def check_condition_iv(spec, tol=DEFAULT_IV_TOL):
    """
    Check z^q f(z, b) -> b/Gamma(1-q) as z -> 0.

    The limit at each radius rho in {1e-3, 1e-5, 1e-7} R is the mean of F over
    8 angles; for analytic F this is F(0, b) up to O(rho^8). The spread
    max |F - mean| on each circle must shrink towards the origin: a spread
    that grows, a non-finite value or a raised singularity is a condition (iii)
    failure, and the check fails.

    Returns:
        dict: pass, observed_limit, target, means, spreads, condition_iii, error

    Example:
        f = "t", b = 1 -> pass False, observed 0, target 1/Gamma(1-q)
        F = "t/gamma(1-q) + 1/z" -> pass False, condition_iii False
    """
    target = spec.target
    angles = 2.0 * np.pi * np.arange(CONDITION_IV_ANGLES) / CONDITION_IV_ANGLES
    report = {"pass": False, "observed_limit": complex("nan"), "target": target,
              "means": [], "spreads": [], "condition_iii": True, "error": None}

    try:
        for scale in CONDITION_IV_RADII:
            z = scale * spec.R * np.exp(1j * angles)
            values = np.broadcast_to(np.asarray(spec.F(z, np.full(z.shape, spec.b)), dtype=complex), z.shape)
            mean = complex(np.mean(values))
            report["means"].append(mean)
            report["spreads"].append(float(np.max(np.abs(values - mean))))
    except SingularityError as e:
        report["condition_iii"] = False
        report["error"] = str(e)
        return report

    means = np.array(report["means"])
    spreads = np.array(report["spreads"])
    if not (np.all(np.isfinite(means)) and np.all(np.isfinite(spreads))):
        report["condition_iii"] = False
        report["error"] = "F(z, b) is not finite near z = 0"
        return report

    scale = tol * max(1.0, abs(target))
    if spreads[-1] > max(spreads[0], scale):
        report["condition_iii"] = False
        report["error"] = (f"F(z, b) is unbounded near z = 0: spread {spreads[0]:.3g} at "
                           f"|z| = {CONDITION_IV_RADII[0]:g} R grows to {spreads[-1]:.3g} "
                           f"at |z| = {CONDITION_IV_RADII[-1]:g} R")
        return report

    report["observed_limit"] = complex(means[-1])
    report["pass"] = bool(np.all(np.abs(means - target) <= scale))
    return report


def _torus(spec, theta, phi):
    return spec.R * np.exp(1j * theta), spec.b + spec.r * np.exp(1j * phi)


def estimate_M(spec, gridN=64, centered=True, threads=1):
    """
    Sup of |F(z, t) - b/Gamma(1-q)| over the torus |z| = R, |t - b| = r.

    A gridN x gridN angle scan (or an (n_z, n_t) pair) is refined by bounded one-dimensional
    maximisation in each angle around the grid maximiser. With centered=False
    the sup of |F| itself is returned.

    Returns:
        dict: {"M": float, "argmax": (z, t)}

    Example:
        F = b/Gamma(1-q) + z/R -> M = 1
    """
    shift = spec.target if centered else 0.0
    n_z, n_t = (gridN, gridN) if np.ndim(gridN) == 0 else (int(gridN[0]), int(gridN[1]))
    h_z = 2.0 * np.pi / n_z
    h_t = 2.0 * np.pi / n_t
    theta, phi = np.meshgrid(h_z * np.arange(n_z), h_t * np.arange(n_t), indexing="ij")

    def modulus(th, ph):
        z, t = _torus(spec, th, ph)
        return np.abs(np.broadcast_to(np.asarray(spec.F(z, t), dtype=complex), np.shape(z)) - shift)

    values = map_points(modulus, theta, phi, threads=threads)
    k = int(np.argmax(values))
    best = float(values.flat[k])
    th0, ph0 = float(theta.flat[k]), float(phi.flat[k])

    if best > 0:
        for _ in range(2):
            res = minimize_scalar(lambda a: -float(modulus(a, ph0)), bounds=(th0 - h_z, th0 + h_z),
                                  method="bounded", options={"xatol": 1e-10})
            if -res.fun > best:
                best, th0 = -float(res.fun), float(res.x)
            res = minimize_scalar(lambda a: -float(modulus(th0, a)), bounds=(ph0 - h_t, ph0 + h_t),
                                  method="bounded", options={"xatol": 1e-10})
            if -res.fun > best:
                best, ph0 = -float(res.fun), float(res.x)

    z, t = _torus(spec, th0, ph0)
    return {"M": best, "argmax": (complex(z), complex(t))}


class RadiusBranch(str, Enum):
    FULL = "full"
    SHRUNK = "shrunk"


@dataclass(frozen=True)
class RadiusResult:
    R0: float
    branch: RadiusBranch
    M: float
    gamma2q: float


def radius_R0(M, q, R, r):
    """
    Existence radius.

    R0 = R                  if M Gamma(2-q) <= r
    R0 = r R/(M Gamma(2-q)) otherwise

    Example:
        radius_R0(2, 0.5, 1, 1).R0 -> 0.5641895835477563
    """
    q = as_order(q)
    if not (R > 0 and r > 0):
        raise ValueError(f"R and r must be positive, got R={R}, r={r}")
    if M < 0:
        raise ValueError(f"M must be nonnegative, got {M}")
    g = gamma(2.0 - q)
    if M * g <= r:
        return RadiusResult(R0=float(R), branch=RadiusBranch.FULL, M=float(M), gamma2q=g)
    return RadiusResult(R0=r * R / (M * g), branch=RadiusBranch.SHRUNK, M=float(M), gamma2q=g)


def naive_invariance_bound(spec, Msup):
    """
    The naive bound M Gamma(1-q) on |Tu| for b = 0, and whether it is <= r.

    Example:
        q = 0.5, M = 1, r = 1 -> bound 1.7724538509055159, sufficient False
    """
    bound = Msup * gamma(1.0 - spec.order)
    return {"bound": bound, "sufficient": bool(bound <= spec.r)}


def cauchy_riemann_defect(spec, h=1e-6, n_points=16):
    """
    Finite-difference analyticity spot check of F in z at t = b.

    Returns max |F_x + i F_y| / max(1, |F_x|) over a circle of radius R/2,
    which vanishes for F analytic in z.
    """
    angles = np.pi * (2.0 * np.arange(n_points) + 1.0) / n_points
    z = 0.5 * spec.R * np.exp(1j * angles)
    t = np.full(z.shape, spec.b)
    fx = (spec.F(z + h, t) - spec.F(z - h, t)) / (2.0 * h)
    fy = (spec.F(z + 1j * h, t) - spec.F(z - 1j * h, t)) / (2.0 * h)
    defect = np.abs(fx + 1j * fy) / np.maximum(1.0, np.abs(fx))
    return float(np.max(defect))
