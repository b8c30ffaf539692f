"""Integral transforms and parameterization maps of a CSK family.

The Cauchy transform is evaluated as the Jacobi continued fraction

    G(z) = 1 / (z - alpha_0 - beta_1 / (z - alpha_1 - beta_2 / (...)))

whose constant tail ``W`` solves ``beta_t W^2 - (z - alpha_t) W + 1 = 0``.
The root taken is the one with ``W ~ 1/z`` at infinity; on the real cut the
boundary value from the upper half-plane is used.

Points ``z`` are plain Python ``complex`` (or real) numbers.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from . import _poly
from .errors import (
    DegenerateDenominator,
    ExcludedPoint,
    OutOfDomain,
    PoleHit,
)
from .measures import (
    JacobiParams,
    VarianceSpec,
    ac_support,
    finite_atoms,
    jacobi_from_quadratic,
    moments_from_jacobi,
    rational_sqrt,
)
from .series import PowerSeries

ComplexPoint = complex

_DOMAIN_SLACK = 1e-12


def _tail_root(alpha: float, beta: float, z):
    d = z - alpha
    if beta == 0:
        return 1 / d
    disc = d * d - 4 * beta
    scale = abs(d) ** 2 + 4 * beta
    if abs(disc) <= 1e-13 * scale:
        disc = 0.0
    if not isinstance(z, complex) and disc >= 0:
        s = math.copysign(math.sqrt(disc), d)
        return 2 / (d + s)
    s = cmath.sqrt(disc)
    a, b = d + s, d - s
    if abs(abs(a) - abs(b)) <= 1e-14 * max(abs(a), abs(b)):
        den = a if s.imag >= 0 else b
    else:
        den = a if abs(a) > abs(b) else b
    return 2 / den


def _level_value(j: JacobiParams, z, level: int):
    """Continued fraction started at ``level``; None stands for infinity."""
    if j.terminates_at is not None:
        start = j.terminates_at
        w = 0.0
        if level >= start:
            return w
    else:
        start = max(j.tail_start, level)
        w = _tail_root(float(j.alpha_tail), float(j.beta_tail), z)
    for k in range(start - 1, level - 1, -1):
        b = float(j.beta(k + 1))
        if w is None:
            if b != 0:
                w = 0.0
                continue
            w = 0.0
        den = z - float(j.alpha(k)) - b * w
        w = None if den == 0 else 1 / den
    return w


def cauchy_transform(j: JacobiParams, z: ComplexPoint):
    """``G(z) = int 1/(z - x) nu(dx)``.  Raises PoleHit exactly at an atom."""
    if isinstance(z, (int, Fraction)):
        z = float(z)
    w = _level_value(j, z, 0)
    if w is None:
        raise PoleHit(z)
    return w


def inverse_cauchy(j: JacobiParams, z) -> float | complex:
    """``1 / G(z)`` written as ``z - alpha_0 - beta_1 W_1(z)``; finite at atoms."""
    w1 = _level_value(j, z, 1)
    if w1 is None:
        return math.inf
    return z - float(j.alpha(0)) - float(j.beta(1)) * w1


def cauchy_transform_exact(j: JacobiParams, z: Fraction) -> Fraction:
    """Exact ``G(z)`` for rational ``z`` off the support.

    Only available when the tail discriminant is a rational square; raises
    ValueError otherwise.
    """
    z = Fraction(z)
    if j.terminates_at is not None:
        start, w = j.terminates_at, Fraction(0)
    else:
        start = j.tail_start
        d = z - j.alpha_tail
        root = rational_sqrt(d * d - 4 * j.beta_tail)
        if root is None:
            raise ValueError(f"tail of G is irrational (or z inside the support) at z={z}")
        den = d + root if d >= 0 else d - root
        w = 2 / den
    for k in range(start - 1, -1, -1):
        den = z - j.alpha(k) - j.beta(k + 1) * w
        if den == 0:
            if k == 0:
                raise PoleHit(z)
            raise ValueError(f"intermediate pole at level {k}")
        w = 1 / den
    return w


@functools.lru_cache(maxsize=256)
def atoms(j: JacobiParams) -> tuple:
    """Atoms ``((x, weight), ...)`` of the measure, sorted by location.

    Poles of ``G`` off the absolutely continuous support.  The head of the
    continued fraction is a Moebius map ``(p + q W) / (r + s W)`` in the tail
    ``W``; a pole needs ``W = -r/s``, which combined with the tail quadratic
    gives ``beta_t r^2 + (z - alpha_t) r s + s^2 = 0``.  Real roots whose
    ``W`` is the physical branch are atoms; the mass is the residue of ``G``,
    using ``W' = W / (2 beta_t W - (z - alpha_t))``.
    """
    if j.terminates_at is not None:
        return finite_atoms(j)
    p, q, r, s = _poly.ZERO, _poly.ONE, _poly.ONE, _poly.ZERO
    for k in range(j.tail_start - 1, -1, -1):
        shift = _poly.sub(_poly.X, _poly.const(j.alpha(k)))
        b = j.beta(k + 1)
        p, q, r, s = (
            r,
            s,
            _poly.sub(_poly.mul(shift, r), _poly.scale(p, b)),
            _poly.sub(_poly.mul(shift, s), _poly.scale(q, b)),
        )
    if not s:
        return ()
    shift_t = _poly.sub(_poly.X, _poly.const(j.alpha_tail))
    cond = _poly.add(
        _poly.add(_poly.scale(_poly.mul(r, r), j.beta_tail), _poly.mul(shift_t, _poly.mul(r, s))),
        _poly.mul(s, s),
    )
    if len(cond) < 2:
        return ()
    lo, hi = ac_support(j)
    found = []
    for root in np.roots([float(c) for c in reversed(cond)]):
        if abs(root.imag) > 1e-9 * max(1.0, abs(root.real)):
            continue
        x = float(root.real)
        if lo - 1e-9 <= x <= hi + 1e-9:
            continue
        w_phys = _tail_root(float(j.alpha_tail), float(j.beta_tail), x)
        rv, sv = _poly.evaluate(r, x), _poly.evaluate(s, x)
        if abs(rv + sv * w_phys) > 1e-8 * (abs(rv) + abs(sv * w_phys)):
            continue
        at, bt = float(j.alpha_tail), float(j.beta_tail)
        dw = w_phys / (2 * bt * w_phys - (x - at))
        slope = _poly.evaluate(_poly.deriv(r), x) + _poly.evaluate(_poly.deriv(s), x) * w_phys + sv * dw
        mass = (_poly.evaluate(p, x) + _poly.evaluate(q, x) * w_phys) / slope
        if mass > 1e-14 and not any(abs(x - y) < 1e-9 for y, _ in found):
            found.append((x, mass))
    return tuple(sorted(found))


@dataclass(frozen=True)
class MeansDomain:
    m_minus: float
    m_plus: float
    theta_minus: float
    theta_plus: float
    A: float
    B: float

    def contains_mean(self, m) -> bool:
        m = float(m)
        return self.m_minus - _DOMAIN_SLACK <= m <= self.m_plus + _DOMAIN_SLACK

    def contains_theta(self, theta) -> bool:
        t = float(theta)
        return self.theta_minus - _DOMAIN_SLACK <= t <= self.theta_plus + _DOMAIN_SLACK


def _edge_mean(j: JacobiParams, edge: float) -> float:
    # m = edge - 1/G(edge) = alpha_0 + beta_1 W_1(edge), the limit when G(edge) is infinite
    w1 = _level_value(j, edge, 1)
    if w1 is None:
        return edge
    return float(j.alpha(0)) + float(j.beta(1)) * float(np.real(w1))


@functools.lru_cache(maxsize=256)
def domain_of_means(j: JacobiParams) -> MeansDomain:
    """Domain of means ``(m_-, m_+)`` and of ``theta``.

    ``m_+ = B - 1/G(B)`` with ``B = max(0, sup supp)``, and symmetrically at
    ``A``.  When ``G`` diverges at the endpoint the value is the endpoint.
    """
    if j.terminates_at is not None:
        pts = [x for x, _ in finite_atoms(j)]
    else:
        lo, hi = ac_support(j)
        pts = [lo, hi] + [x for x, _ in atoms(j)]
    A, B = min(0.0, min(pts)), max(0.0, max(pts))
    m_plus = _edge_mean(j, B) if B > 0 else 0.0
    m_minus = _edge_mean(j, A) if A < 0 else 0.0
    theta_plus = 1.0 / B if B > 0 else math.inf
    theta_minus = 1.0 / A if A < 0 else -math.inf
    return MeansDomain(m_minus, m_plus, theta_minus, theta_plus, A, B)


def _check_theta(j: JacobiParams, theta) -> None:
    dom = domain_of_means(j)
    if not dom.contains_theta(theta):
        raise OutOfDomain(
            f"theta={float(theta)} outside ({dom.theta_minus}, {dom.theta_plus})"
        )


def _check_mean(spec: VarianceSpec, m) -> MeansDomain:
    dom = domain_of_means(jacobi_from_quadratic(spec))
    if not dom.contains_mean(m):
        raise OutOfDomain(f"m={float(m)} outside ({dom.m_minus}, {dom.m_plus})")
    return dom


def m_transform(j: JacobiParams, theta: float) -> float:
    """``M(theta) = int 1/(1 - theta x) nu(dx) = G(1/theta) / theta``."""
    _check_theta(j, theta)
    if theta == 0:
        return 1.0
    z = 1.0 / float(theta)
    return float(np.real(cauchy_transform(j, z))) * z


def mean_map(j: JacobiParams, theta: float) -> float:
    """``k(theta) = 1/theta - 1/G(1/theta)``, the mean of the tilted measure.

    Evaluated as ``alpha_0 + beta_1 W_1(1/theta)``, which is the same
    quantity with the leading cancellation removed.
    """
    _check_theta(j, theta)
    if theta == 0:
        return float(j.alpha(0))
    return _edge_mean(j, 1.0 / float(theta))


def psi(spec: VarianceSpec, m):
    """Inverse of the mean map, ``m / (m^2 + V(m))``."""
    _check_mean(spec, m)
    den = m * m + spec(m)
    if den == 0:
        raise OutOfDomain(f"m^2 + V(m) vanishes at m={m}")
    return m / den


def psi_by_bisection(j: JacobiParams, m: float, xtol: float = 1e-15) -> float:
    """Root of ``mean_map(theta) = m`` by bracketed bisection (cross-check)."""
    dom = domain_of_means(j)
    if m == 0:
        return 0.0
    if m > 0:
        lo, hi = 0.0, dom.theta_plus
    else:
        lo, hi = dom.theta_minus, 0.0
    return bisect(lambda t: mean_map(j, t) - m, lo, hi, xtol=xtol, maxiter=400)


def pseudo_variance(spec: VarianceSpec, m):
    """``V(m) = a0 + a1 m + a2 m^2``, checked against ``m (1/psi(m) - m)``."""
    _check_mean(spec, m)
    value = spec(m)
    if m != 0:
        via_psi = m * (1 / psi(spec, m) - m)
        if isinstance(m, Fraction):
            assert via_psi == value
        else:
            assert abs(via_psi - value) <= 1e-9 * (1 + abs(value))
    return value


def variance(spec: VarianceSpec, m):
    """Variance of ``Q_m``; equal to the pseudo-variance since ``nu`` has mean 0."""
    return pseudo_variance(spec, m)


def qm_density(spec: VarianceSpec, m, x):
    """Density of ``Q_m`` with respect to ``nu``: ``V / (V + m (m - x))``."""
    _check_mean(spec, m)
    v = spec(m)
    return v / (v + m * (m - x))


def qm_cauchy_transform(j: JacobiParams, spec: VarianceSpec, m, z: ComplexPoint):
    """Cauchy transform of ``Q_m`` from that of ``nu``."""
    _check_mean(spec, m)
    if m == 0:
        return cauchy_transform(j, z)
    v_over_m = spec(m) / m
    pole = m + v_over_m
    if z == pole:
        raise ExcludedPoint(f"z equals m + V(m)/m = {pole}")
    return (v_over_m * cauchy_transform(j, z) - 1) / (pole - z)


def stieltjes_density(j: JacobiParams, x: float, epsilon: float = 1e-6) -> float:
    """``-Im G(x + i eps) / pi`` Richardson-extrapolated between eps and eps/2."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")

    def at(eps):
        return -cauchy_transform(j, complex(x, eps)).imag / math.pi

    return 2 * at(epsilon / 2) - at(epsilon)


def z_of_m(spec: VarianceSpec, m):
    """``z(m) = m + V(m)/m``; the point where ``G = m / V(m)``."""
    if m == 0:
        raise DegenerateDenominator("z(m) is infinite at m = 0")
    return m + spec(m) / m


def laurent_coefficients(j: JacobiParams, n: int) -> tuple:
    """Exact coefficients of ``G`` at infinity: ``G(z) = sum_k c_k z^-(k+1)``.

    Works on ``w = 1/z`` where ``G = w M(w)`` and each level satisfies
    ``M_k = 1 / (1 - alpha_k w - beta_(k+1) w^2 M_(k+1))``; the tail is the
    fixed point of the same map, reached by iteration.
    """
    w = PowerSeries([0, 1], n)
    if j.terminates_at is not None:
        start = j.terminates_at
        cur = PowerSeries([1], n)
    else:
        start = j.tail_start
        cur = PowerSeries([1], n)
        a, b = j.alpha_tail, j.beta_tail
        while True:
            nxt = (1 - a * w - b * w * w * cur).inverse()
            if nxt == cur:
                break
            cur = nxt
    for k in range(start - 1, -1, -1):
        cur = (1 - j.alpha(k) * w - j.beta(k + 1) * w * w * cur).inverse()
    return cur.coeffs


def mean_map_series(j: JacobiParams, order: int) -> PowerSeries:
    """Taylor series of ``k(theta) = (M - 1) / (theta M)`` at 0, from exact moments."""
    gamma = moments_from_jacobi(j, order + 1).gamma
    M = PowerSeries(gamma, order + 1)
    return (M - 1).shift_down() / PowerSeries(gamma[: order + 1], order)


def pseudo_variance_series(j: JacobiParams, order: int) -> PowerSeries:
    """Taylor series of ``V(m) = m / psi(m) - m^2`` to the given order.

    Chain: moments, ``M(theta)``, ``k(theta)``, series reversion to ``psi``.
    """
    k = mean_map_series(j, order + 1)
    psi_s = k.reversion()
    v = psi_s.shift_down().inverse()
    return v - PowerSeries([0, 0, 1], order)


def psi_series(spec: VarianceSpec, order: int) -> PowerSeries:
    """Taylor series of the closed form ``m / (m^2 + V(m))``."""
    den = PowerSeries([spec.a0, spec.a1, spec.a2 + 1], order)
    return PowerSeries([0, 1], order) / den
