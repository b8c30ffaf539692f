"""Exact ground truth: moment functionals, Gram matrices, Hankel tests.

Everything here that makes an exactness claim runs over ``Fraction``.
``gauss_rule`` is the one floating-point routine and is never used to
decide an exact check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import _poly
from .errors import InsufficientMoments, TerminatedSequence
from .measures import JacobiParams, MomentSequence


def integrate_poly(coeffs: Sequence, moments: MomentSequence) -> Fraction:
    """``sum(c_k * gamma_k)``, the integral of the polynomial against the measure."""
    coeffs = _poly.trim(Fraction(c) for c in coeffs)
    if len(coeffs) > len(moments):
        raise InsufficientMoments(
            f"degree {len(coeffs) - 1} needs moments up to that order, have {moments.order}"
        )
    return sum((c * moments[k] for k, c in enumerate(coeffs)), Fraction(0))


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple  # tuple of row tuples

    @property
    def size(self) -> int:
        return len(self.entries)

    def diagonal(self) -> tuple:
        return tuple(self.entries[i][i] for i in range(self.size))

    def off_diagonal(self):
        """Yield ``(i, j, value)`` for ``i < j``."""
        for i in range(self.size):
            for j in range(i + 1, self.size):
                yield i, j, self.entries[i][j]

    def is_diagonal(self) -> bool:
        return all(v == 0 for _, _, v in self.off_diagonal())


def _rows(p) -> tuple:
    return tuple(getattr(p, "coeffs", p))


def gram_matrix(p, moments: MomentSequence) -> GramMatrix:
    """Pairwise integrals ``int P_i P_j`` for a polynomial sequence."""
    rows = _rows(p)
    n = len(rows)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = integrate_poly(_poly.mul(rows[i], rows[j]), moments)
            out[i][j] = out[j][i] = v
    return GramMatrix(tuple(tuple(r) for r in out))


@dataclass(frozen=True)
class GaussRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.sum(self.weights * f(self.nodes)))


def gauss_rule(j: JacobiParams, N: int) -> GaussRule:
    """N-point Gauss rule from the truncated Jacobi matrix (Golub-Welsch)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if j.terminates_at is not None and N > j.terminates_at:
        raise TerminatedSequence(
            f"measure has {j.terminates_at} atoms; no {N}-point Gauss rule exists"
        )
    d = np.array([float(j.alpha(k)) for k in range(N)])
    e = np.sqrt(np.array([float(j.beta(k)) for k in range(1, N)]))
    if N == 1:
        return GaussRule(d.copy(), np.ones(1))
    nodes, vecs = eigh_tridiagonal(d, e)
    weights = vecs[0, :] ** 2
    return GaussRule(nodes, weights / weights.sum())


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    """Fraction-exact Bareiss determinant with row pivoting."""
    a = [[Fraction(v) for v in row] for row in matrix]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for jj in range(k + 1, n):
                a[i][jj] = (a[i][jj] * a[k][k] - a[i][k] * a[k][jj]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hankel(moments: Sequence, size: int) -> list:
    return [[moments[i + j] for j in range(size)] for i in range(size)]


@dataclass(frozen=True)
class HankelVerdict:
    """Leading principal Hankel minors of orders ``1..depth``.

    ``positive`` holds when all minors are positive, or positive up to some
    order and zero from there on (finitely many atoms).
    """

    determinants: tuple
    positive: bool
    negative_at: Optional[int]
    zero_from: Optional[int]


def hankel_positivity(moments, depth: int) -> HankelVerdict:
    gamma = tuple(getattr(moments, "gamma", moments))
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if len(gamma) < 2 * depth - 1:
        raise InsufficientMoments(
            f"depth {depth} needs moments up to order {2 * depth - 2}, have {len(gamma) - 1}"
        )
    dets = tuple(determinant(hankel(gamma, k)) for k in range(1, depth + 1))
    negative_at = next((k + 1 for k, d in enumerate(dets) if d < 0), None)
    zero_from = next((k + 1 for k, d in enumerate(dets) if d == 0), None)
    positive = negative_at is None and (
        zero_from is None or all(d == 0 for d in dets[zero_from - 1 :])
    )
    return HankelVerdict(dets, positive, negative_at, zero_from)
