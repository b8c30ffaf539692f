"""Polynomials attached to a CSK family.

``P_n`` is the coefficient of ``m^n`` in the density
``f(x, m) = V(m) / (V(m) + m (m - x))`` of ``Q_m`` with respect to ``nu``.
Two independent constructions are provided (series division and the
three-term recurrence) together with the monic orthogonal ``T_n``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import _poly
from .errors import DegenerateDenominator, TerminatedSequence
from .measures import JacobiParams, MomentSequence, VarianceSpec, jacobi_from_quadratic


class PolyKind(enum.Enum):
    AssocP = "assoc"
    MonicT = "monic"


@dataclass(frozen=True)
class PolySequence:
    """Rows ``coeffs[n]`` hold the monomial coefficients of the n-th polynomial.

    ``terminated_at`` is set when the generating measure has finitely many
    atoms; the sequence then stops before that index whatever was requested.
    """

    coeffs: tuple
    kind: PolyKind
    spec: Optional[VarianceSpec] = None
    terminated_at: Optional[int] = None

    def __post_init__(self):
        for n, row in enumerate(self.coeffs):
            if len(row) != n + 1 or row[-1] == 0:
                raise ValueError(f"row {n} must have degree exactly {n}")

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def leading(self, n: int) -> Fraction:
        return self.coeffs[n][-1]

    def evaluate(self, n: int, x):
        return _poly.evaluate(self.coeffs[n], x)


class BivariateSeries:
    """Truncated series ``sum_n m^n c_n(x)`` with polynomial coefficients.

    Coefficients are dense polynomials in ``x`` over the rationals (see
    ``_poly``).  Division requires a divisor whose ``m^0`` coefficient is a
    nonzero constant.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence, order: int):
        c = [_poly.trim(p) for p in coeffs][: order + 1]
        c += [_poly.ZERO] * (order + 1 - len(c))
        self.coeffs = tuple(c)
        self.order = order

    @classmethod
    def from_scalars(cls, values: Sequence, order: int) -> BivariateSeries:
        return cls([_poly.const(v) for v in values], order)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __add__(self, other: BivariateSeries) -> BivariateSeries:
        n = min(self.order, other.order)
        return BivariateSeries(
            [_poly.add(a, b) for a, b in zip(self.coeffs, other.coeffs)], n
        )

    def __sub__(self, other: BivariateSeries) -> BivariateSeries:
        n = min(self.order, other.order)
        return BivariateSeries(
            [_poly.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)], n
        )

    def __mul__(self, other: BivariateSeries) -> BivariateSeries:
        n = min(self.order, other.order)
        out = [_poly.ZERO] * (n + 1)
        for i in range(n + 1):
            if not self.coeffs[i]:
                continue
            for k in range(n + 1 - i):
                out[i + k] = _poly.add(out[i + k], _poly.mul(self.coeffs[i], other.coeffs[k]))
        return BivariateSeries(out, n)

    def __truediv__(self, other: BivariateSeries) -> BivariateSeries:
        lead = other.coeffs[0]
        if len(lead) != 1:
            raise ZeroDivisionError("divisor's m^0 coefficient must be a nonzero constant")
        inv = 1 / lead[0]
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = self.coeffs[k]
            for i in range(1, k + 1):
                acc = _poly.sub(acc, _poly.mul(other.coeffs[i], out[k - i]))
            out.append(_poly.scale(acc, inv))
        return BivariateSeries(out, n)


def _termination(spec: VarianceSpec) -> Optional[int]:
    return jacobi_from_quadratic(spec).terminates_at


def _truncate(rows: list, stop: Optional[int]) -> list:
    return rows if stop is None else rows[:stop]


def assoc_from_variance_series(
    v: Sequence, N: int, spec: Optional[VarianceSpec] = None,
    terminated_at: Optional[int] = None,
) -> PolySequence:
    """``P_0..P_N`` for an arbitrary pseudo-variance given by Taylor coefficients.

    ``v`` must reach order ``N``; it is a full polynomial when shorter.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    vs = BivariateSeries.from_scalars(list(v), N)
    mx = BivariateSeries([_poly.ZERO, _poly.scale(_poly.X, -1), _poly.ONE], N)
    f = vs / (vs + mx)
    rows = _truncate(list(f.coeffs), terminated_at)
    return PolySequence(tuple(rows), PolyKind.AssocP, spec, terminated_at)


def assoc_from_density(spec: VarianceSpec, N: int) -> PolySequence:
    """``P_n`` read off the expansion of ``f(x, m)`` in powers of ``m``."""
    return assoc_from_variance_series(spec.coeffs, N, spec, _termination(spec))


def assoc_from_recurrence(spec: VarianceSpec, N: int) -> PolySequence:
    """``P_n`` from the three-term relation with corrected low indices.

    ``x P_0 = a0 P_1``, ``x P_1 = a1 P_1 + a0 P_2 + P_0`` and, for ``n >= 2``,
    ``x P_n = (1 + a2) P_(n-1) + a1 P_n + a0 P_(n+1)``.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    a0, a1, a2 = spec.coeffs
    stop = _termination(spec)
    limit = N + 1 if stop is None else min(N + 1, stop)
    rows = [_poly.ONE]
    if limit > 1:
        rows.append(_poly.scale(_poly.X, 1 / a0))
    for n in range(1, limit - 1):
        back = Fraction(1) if n == 1 else 1 + a2
        nxt = _poly.sub(
            _poly.sub(_poly.mulx(rows[n]), _poly.scale(rows[n], a1)),
            _poly.scale(rows[n - 1], back),
        )
        rows.append(_poly.scale(nxt, 1 / a0))
    return PolySequence(tuple(rows), PolyKind.AssocP, spec, stop)


def monic_sequence(j: JacobiParams, N: int, spec: Optional[VarianceSpec] = None) -> PolySequence:
    """Monic orthogonal ``T_(n+1) = (x - alpha_n) T_n - beta_n T_(n-1)``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    stop = j.terminates_at
    limit = N + 1 if stop is None else min(N + 1, stop)
    rows = [_poly.ONE]
    prev = _poly.ZERO
    for n in range(limit - 1):
        nxt = _poly.sub(
            _poly.sub(_poly.mulx(rows[n]), _poly.scale(rows[n], j.alpha(n))),
            _poly.scale(prev, j.beta(n)) if n > 0 else _poly.ZERO,
        )
        prev = rows[n]
        rows.append(nxt)
    return PolySequence(tuple(rows), PolyKind.MonicT, spec, stop)


def generating_partial_sum(p: PolySequence, x, m, N: int):
    """``sum_(n <= N) m^n P_n(x)``."""
    if N + 1 > len(p):
        if p.terminated_at is not None:
            raise TerminatedSequence(f"sequence stops at index {p.terminated_at}")
        raise ValueError(f"sequence has {len(p)} rows, need {N + 1}")
    total = 0
    power = 1
    for n in range(N + 1):
        total += power * p.evaluate(n, x)
        power *= m
    return total


def convergence_guard(spec: VarianceSpec) -> float:
    """Conservative default radius in ``m`` for partial sums of ``f(x, m)``."""
    a0, a1, a2 = (float(c) for c in spec.coeffs)
    return 1.0 / (2.0 * (abs(a1) + 2.0 * math.sqrt(a0 * (1.0 + max(a2, 0.0))) + 1.0))


def pointwise_radius(spec: VarianceSpec, support_bound: float) -> float:
    """Lower bound on the radius of ``sum m^n P_n(x)`` for all ``|x| <= support_bound``.

    The only singularities are the roots of ``a0 + (a1 - x) m + (1 + a2) m^2``,
    bounded away from 0 by the reversed Cauchy root bound.
    """
    a0, a1, a2 = (float(c) for c in spec.coeffs)
    return a0 / (a0 + max(abs(a1) + support_bound, abs(1.0 + a2)))


def norms_squared(spec: VarianceSpec, n: int) -> Fraction:
    """``int P_n^2 d nu = beta_1 ... beta_n / a0^(2n)``."""
    j = jacobi_from_quadratic(spec)
    return j.beta_product(n) / spec.a0 ** (2 * n)


def g_kernel(spec: VarianceSpec, m, mt, terms: int = 400):
    """``g(m, mt) = int f(x, m) f(x, mt) nu(dx)`` in closed form.

    On the diagonal ``m == mt`` the closed form is 0/0 and the series
    ``sum (m mt)^n int P_n^2`` is summed instead.
    """
    if m == mt:
        j = jacobi_from_quadratic(spec)
        t = float(m * mt)
        a0_sq = float(spec.a0) ** 2
        total, norm, power = 1.0, 1.0, 1.0
        for n in range(1, terms):
            b = float(j.beta(n))
            if b == 0:
                break
            norm *= b / a0_sq
            power *= t
            term = norm * power
            total += term
            if abs(term) < 1e-18 * abs(total):
                break
        return total
    num = mt * spec(m) - m * spec(mt)
    den = mt * m * m - m * mt * mt + num
    if den == 0:
        raise DegenerateDenominator(f"g kernel denominator vanishes at ({m}, {mt})")
    return num / den


def _solve(matrix: list, rhs: list) -> list:
    n = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def basis_expansion(seq: PolySequence, moments: MomentSequence, poly) -> list:
    """Coefficients ``c_s`` with ``poly = sum c_s P_s``, from Gram data.

    Solves ``Gram c = (int poly P_s)_s`` exactly over the rows of ``seq``;
    the sequence must span degree ``deg(poly)``.
    """
    from .oracle import gram_matrix, integrate_poly

    deg = len(_poly.trim(poly)) - 1
    rows = seq.coeffs[: deg + 1]
    if len(rows) < deg + 1:
        raise ValueError(f"need rows up to degree {deg}")
    gram = gram_matrix(rows, moments)
    rhs = [integrate_poly(_poly.mul(poly, r), moments) for r in rows]
    return _solve([list(r) for r in gram.entries], rhs)
