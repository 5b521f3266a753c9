"""
Riemann-Liouville fractional integral and derivative along the segment 0 -> z.

Two independent paths are provided: an exact term-wise action on power series
and Gauss-Jacobi quadrature after the substitution zeta = z t. The integral
operator T of the fixed-point formulation lives here too.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from cfde_special import DomainError, SingularityError, gamma, gamma_ratio, jacobi_rule, ppow

DEFAULT_N_QUAD = 32


@dataclass(frozen=True)
class FracOrder:
    """Fractional order q in the open interval (0, 1)."""
    q: float

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0) or math.isnan(q):
            raise DomainError(f"fractional order must lie in (0, 1), got q={self.q}")
        object.__setattr__(self, "q", q)

    def __float__(self):
        return self.q


def as_order(q):
    """Validated float value of q (accepts FracOrder or a number)."""
    if isinstance(q, FracOrder):
        return q.q
    return FracOrder(q).q


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """
    Truncated power series a_0 + a_1 z + ... + a_N z^N about 0.

    radius is the nominal disc of validity; evaluation uses Horner order.
    """
    coeffs: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a power series needs at least one coefficient")
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def degree(self):
        return self.coeffs.size - 1

    def __call__(self, z):
        z_arr = np.asarray(z, dtype=complex)
        acc = np.full(z_arr.shape, self.coeffs[-1], dtype=complex)
        for c in self.coeffs[-2::-1]:
            acc = acc * z_arr + c
        if np.ndim(z) == 0:
            return complex(acc)
        return acc

    def derivative(self):
        if self.degree == 0:
            return PowerSeries([0j], self.radius)
        n = np.arange(1, self.coeffs.size)
        return PowerSeries(n * self.coeffs[1:], self.radius)

    def has_real_coefficients(self, tol=0.0):
        return bool(np.all(np.abs(self.coeffs.imag) <= tol))


@dataclass(frozen=True, eq=False)
class ScaledSeries:
    """
    z^exponent * series(z), principal branch.

    Integer parts of the exponent are folded into the series on construction,
    so exponent always lies in (-1, 1).
    """
    exponent: float
    series: PowerSeries

    def __post_init__(self):
        s = float(self.exponent)
        series = self.series
        if not s > -1.0:
            raise DomainError(f"scaled series exponent must be > -1, got {s}")
        shift = 0
        while s >= 1.0:
            s -= 1.0
            shift += 1
        if shift:
            series = PowerSeries(np.concatenate([np.zeros(shift, dtype=complex), series.coeffs]), series.radius)
        object.__setattr__(self, "exponent", s)
        object.__setattr__(self, "series", series)

    @property
    def coeffs(self):
        return self.series.coeffs

    def __call__(self, z):
        z_arr = np.asarray(z, dtype=complex)
        at_zero = z_arr == 0
        if self.exponent < 0 and self.coeffs[0] == 0 and np.any(at_zero):
            # z^s (a_1 z + ...) -> 0 at the origin
            safe = np.where(at_zero, 1.0, z_arr)
            value = np.where(at_zero, 0j, ppow(safe, self.exponent) * self.series(safe))
            return complex(value) if np.ndim(z) == 0 else value
        return ppow(z, self.exponent) * self.series(z)


@dataclass(frozen=True, eq=False)
class AnalyticFn:
    """
    Callable asserted analytic on the open disc of the given radius and
    continuous on its closure. prime, when known, is its derivative.
    """
    fn: object
    radius: float = 1.0
    prime: object = field(default=None)

    def __call__(self, z):
        return self.fn(z)

    def derivative(self):
        if self.prime is None:
            raise ValueError("no derivative attached to this function")
        return AnalyticFn(self.prime, self.radius)


def _as_scaled(u):
    if isinstance(u, ScaledSeries):
        return u
    if isinstance(u, PowerSeries):
        return ScaledSeries(0.0, u)
    raise TypeError(
        f"series path needs a PowerSeries or ScaledSeries, got {type(u).__name__}; "
        "use the quadrature path for other functions"
    )


def frac_integral_series(u, q):
    """
    Exact I^q of a (scaled) power series.

    I^q[z^s sum a_n z^n] = z^(s+q) sum a_n Gamma(n+s+1)/Gamma(n+s+q+1) z^n

    Args:
        u (PowerSeries or ScaledSeries): Input series
        q (FracOrder or float): Order in (0, 1)

    Returns:
        ScaledSeries

    Example:
        frac_integral_series(PowerSeries([1]), 0.5) -> z^0.5 * [1/Gamma(1.5)]
    """
    q = as_order(q)
    u = _as_scaled(u)
    s = u.exponent
    n = np.arange(u.coeffs.size)
    factors = np.array([gamma_ratio(k + s + 1.0, k + s + q + 1.0) for k in n])
    return ScaledSeries(s + q, PowerSeries(u.coeffs * factors, u.series.radius))


def frac_derivative_series(u, q):
    """
    Exact D^q of a (scaled) power series, term by term.

    D^q[z^s sum a_n z^n] = z^(s-q) sum a_n Gamma(n+s+1)/Gamma(n+s+1-q) z^n

    Only exponents s >= 0 are accepted so every Gamma argument stays positive.

    Example:
        frac_derivative_series(PowerSeries([b]), q) -> z^(-q) * [b/Gamma(1-q)]
    """
    q = as_order(q)
    u = _as_scaled(u)
    s = u.exponent
    if s < 0:
        raise DomainError(f"series derivative needs a nonnegative exponent, got {s}")
    n = np.arange(u.coeffs.size)
    factors = np.array([gamma_ratio(k + s + 1.0, k + s + 1.0 - q) for k in n])
    return ScaledSeries(s - q, PowerSeries(u.coeffs * factors, u.series.radius))


def _check_radius(u, z):
    radius = getattr(u, "radius", None)
    if radius is not None and np.any(np.abs(z) > radius * (1.0 + 1e-12)):
        raise DomainError(f"point outside the disc of radius {radius}")


def sample(fn, points):
    """fn evaluated on an array of points, broadcast to the points' shape."""
    values = np.asarray(fn(points), dtype=complex)
    return np.broadcast_to(values, np.shape(points))


def sample2(fn, z, t):
    """Two-argument variant of sample()."""
    values = np.asarray(fn(z, t), dtype=complex)
    return np.broadcast_to(values, np.shape(z))


def _rule_sum(rule, fn, z):
    """
    Sum w_k fn(z t_k) in node order for scalar or array z.

    Returns an array of z's shape.
    """
    z_arr = np.asarray(z, dtype=complex)
    points = z_arr[..., None] * rule.nodes
    values = sample(fn, points)
    return rule.integrate(np.moveaxis(values, -1, 0))


def _finish(result, z):
    if np.ndim(z) == 0:
        return complex(result)
    return result


def frac_integral_reduced(u, q, z, n=DEFAULT_N_QUAD, exponent=0.0):
    """
    Smooth factor of I^q[z^s g]: (1/Gamma(q)) int_0^1 t^s (1-t)^(q-1) g(z t) dt.

    Finite at z = 0, where it equals g(0) Gamma(s+1)/Gamma(s+q+1).
    """
    q = as_order(q)
    _check_radius(u, z)
    rule = jacobi_rule(q - 1.0, exponent, n)
    return _finish(_rule_sum(rule, u, z) / gamma(q), z)


def frac_integral_quad(u, q, z, n=DEFAULT_N_QUAD, exponent=0.0):
    """
    I^q u(z) by Gauss-Jacobi quadrature along the segment 0 -> z.

    I^q u(z) = z^q/Gamma(q) int_0^1 (1-t)^(q-1) u(z t) dt

    With exponent=s the input is z^s g(z) and u is g; the weight absorbs t^s.

    Args:
        u (callable): g, vectorised over numpy arrays
        q (FracOrder or float): Order in (0, 1)
        z (complex or ndarray): Evaluation point(s)
        n (int): Quadrature nodes
        exponent (float): Prefactor power s > -1

    Returns:
        complex or ndarray

    Example:
        frac_integral_quad(lambda z: 1, 0.5, 1) -> 1.1283791670955126  (1/Gamma(1.5))
        frac_integral_quad(lambda z: 1, 0.5, 0) -> 0
    """
    q = as_order(q)
    reduced = frac_integral_reduced(u, q, z, n, exponent)
    return _finish(ppow(z, q + exponent) * reduced, z)


def frac_derivative_quad(u, uprime, q, z, n=DEFAULT_N_QUAD, exponent=0.0):
    """
    D^q u(z) through the regularised split.

    D^q u = u(0) z^(-q)/Gamma(1-q) + I^(1-q)[u'] for analytic u. For a scaled
    input z^s G with s > -1:

        D^q[z^s G](z) = ((s+1-q) z^(s-q) J0 + z^(s+1-q) J1) / Gamma(1-q)
        J0 = int_0^1 t^s (1-t)^(-q) G(z t) dt
        J1 = int_0^1 t^(s+1) (1-t)^(-q) G'(z t) dt

    uprime may be omitted when u carries its own derivative().

    Raises:
        SingularityError: at z = 0 unless the value is finite there
    """
    q = as_order(q)
    if uprime is None:
        if not hasattr(u, "derivative"):
            raise ValueError("frac_derivative_quad needs uprime for a plain callable")
        uprime = u.derivative()
    _check_radius(u, z)

    z_arr = np.asarray(z, dtype=complex)
    at_zero = z_arr == 0

    if exponent == 0.0:
        u0 = complex(np.asarray(u(0j), dtype=complex))
        if np.any(at_zero) and u0 != 0:
            raise SingularityError(f"D^q u is infinite at z = 0 when u(0) = {u0} is nonzero")
        integral = frac_integral_quad(uprime, 1.0 - q, z_arr, n)
        if u0 == 0:
            return _finish(integral, z)
        safe = np.where(at_zero, 1.0, z_arr)
        return _finish(u0 * ppow(safe, -q) / gamma(1.0 - q) + integral, z)

    s = float(exponent)
    if not s > -1.0:
        raise DomainError(f"scaled input exponent must be > -1, got {s}")
    if np.any(at_zero) and s < q:
        raise SingularityError(f"D^q of z^{s} G is infinite at z = 0 for q={q}")

    j0 = _rule_sum(jacobi_rule(-q, s, n), u, z_arr)
    j1 = _rule_sum(jacobi_rule(-q, s + 1.0, n), uprime, z_arr)
    safe = np.where(at_zero, 1.0, z_arr)
    head = np.where(at_zero, 0.0 if s > q else 1.0, ppow(safe, s - q))
    value = ((s + 1.0 - q) * head * j0 + ppow(z_arr, s + 1.0 - q) * j1) / gamma(1.0 - q)
    return _finish(value, z)


def apply_T(F, u, q, z, n=DEFAULT_N_QUAD):
    """
    Integral operator of the fixed-point formulation.

    Tu(z) = (1/Gamma(q)) int_0^1 F(z t, u(z t)) t^(-q) (1-t)^(q-1) dt
    with F(z, t) = z^q f(z, t).

    At z = 0 this is F(0, u(0)) Gamma(1-q), which equals b exactly when the
    compatibility condition F(0, b) = b/Gamma(1-q) holds.

    Args:
        F (callable): F(z, t), vectorised
        u (callable): Current iterate, vectorised
        q (FracOrder or float): Order in (0, 1)
        z (complex or ndarray): Evaluation point(s)
        n (int): Quadrature nodes

    Returns:
        complex or ndarray
    """
    q = as_order(q)
    rule = jacobi_rule(q - 1.0, -q, n)
    result = _rule_sum(rule, lambda w: sample2(F, w, sample(u, w)), z)
    return _finish(result / gamma(q), z)


def quad_self_check(u, q, z, n=DEFAULT_N_QUAD, exponent=0.0):
    """
    Compare I^q u(z) computed with n and 2n nodes.

    Returns:
        dict: {"value": 2n result, "value_n": n result, "difference": |difference|}
    """
    coarse = frac_integral_quad(u, q, z, n, exponent)
    fine = frac_integral_quad(u, q, z, 2 * n, exponent)
    return {
        "value": fine,
        "value_n": coarse,
        "difference": float(np.max(np.abs(np.asarray(fine) - np.asarray(coarse)))),
    }


def cauchy_derivative(fn, z, radius=0.1, n=64):
    """
    u'(z) from the trapezoid rule on the Cauchy integral over |w - z| = radius.

    u'(z) ~ (1/(n radius)) sum_k u(z + radius e^(i theta_k)) e^(-i theta_k)

    radius may be an array matching z. Exact for polynomials of degree <= n.
    """
    z_arr = np.asarray(z, dtype=complex)
    rho = np.broadcast_to(np.asarray(radius, dtype=float), z_arr.shape)
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    points = z_arr[..., None] + rho[..., None] * roots
    values = sample(fn, points)
    result = np.sum(values * np.conj(roots), axis=-1) / (n * rho)
    return _finish(result, z)


def frac_derivative_of_integral_quad(u, uprime, q, z, n=DEFAULT_N_QUAD):
    """
    D^q I^q u on the quadrature path; equals u(z) for analytic u.

    I^q u = z^q G with G the reduced integral, and G' is the reduced integral of
    u' with one extra power of t, so D^q applies as a scaled input.
    """
    q = as_order(q)

    def G(w):
        return frac_integral_reduced(u, q, w, n)

    def G_prime(w):
        return frac_integral_reduced(uprime, q, w, n, exponent=1.0)

    return frac_derivative_quad(G, G_prime, q, z, n, exponent=q)


def frac_integral_of_derivative_quad(u, uprime, q, z, n=DEFAULT_N_QUAD):
    """
    I^q D^q u on the quadrature path; equals u(z) for analytic u.

    D^q u = u(0) z^(-q)/Gamma(1-q) + z^(1-q) H with H the reduced I^(1-q) of u'.
    I^q maps the first term to the constant u(0).
    """
    q = as_order(q)
    u0 = complex(np.asarray(u(0j), dtype=complex))

    def H(w):
        return frac_integral_reduced(uprime, 1.0 - q, w, n)

    return _finish(u0 + np.asarray(frac_integral_quad(H, q, z, n, exponent=1.0 - q)), z)
