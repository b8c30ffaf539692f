"""Generating measures of quadratic CSK families.

A measure is carried by its Jacobi parameters (the monic recurrence
coefficients) and the exact moments they imply; closed-form densities are
never used.  Every quadratic pseudo-variance ``V(m) = a0 + a1 m + a2 m^2``
corresponds to a Jacobi matrix that is constant after the first step:

    alpha = (0, a1, a1, ...),   beta = (a0, a0 (1 + a2), a0 (1 + a2), ...)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import InvalidVariance, NotPositiveDefinite


def _frac(v) -> Fraction:
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12)
    return Fraction(v)


@dataclass(frozen=True)
class VarianceSpec:
    """Coefficients of the pseudo-variance ``a0 + a1 m + a2 m^2``."""

    a0: Fraction
    a1: Fraction = Fraction(0)
    a2: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a0", "a1", "a2"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.a0 <= 0:
            raise InvalidVariance(f"a0 must be positive, got {self.a0}")
        if self.a2 < -1:
            raise InvalidVariance(
                f"a2 must be >= -1 for a probability measure to exist, got {self.a2}"
            )

    def __call__(self, m):
        """Evaluate the pseudo-variance at ``m`` (exact for Fraction input)."""
        if isinstance(m, Fraction):
            return self.a0 + self.a1 * m + self.a2 * m * m
        return float(self.a0) + float(self.a1) * m + float(self.a2) * m * m

    def derivative(self, m):
        if isinstance(m, Fraction):
            return self.a1 + 2 * self.a2 * m
        return float(self.a1) + 2 * float(self.a2) * m

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a0, self.a1, self.a2)

    def __str__(self):
        return f"({self.a0}, {self.a1}, {self.a2})"


class FamilyType(enum.Enum):
    SemiCircle = "SemiCircle"
    MarchenkoPastur = "MarchenkoPastur"
    FreePascal = "FreePascal"
    FreeGamma = "FreeGamma"
    FreeHyperbolic = "FreeHyperbolic"
    FreeBinomial = "FreeBinomial"


# One representative per row of the six-type table (a0 normalized to 1).
TABLE_SPECS: dict[FamilyType, VarianceSpec] = {
    FamilyType.SemiCircle: VarianceSpec(1, 0, 0),
    FamilyType.MarchenkoPastur: VarianceSpec(1, 1, 0),
    FamilyType.FreePascal: VarianceSpec(1, 3, 1),
    FamilyType.FreeGamma: VarianceSpec(1, 2, 1),
    FamilyType.FreeHyperbolic: VarianceSpec(1, 1, 1),
    FamilyType.FreeBinomial: VarianceSpec(1, 1, Fraction(-1, 2)),
}


def classify_family(spec: VarianceSpec) -> FamilyType:
    """Free Meixner type of the family with pseudo-variance ``spec``.

    After the dilation ``x -> x / sqrt(a0)`` the variance reads
    ``1 + a m + b m^2`` with ``a = a1 / sqrt(a0)`` and ``b = a2``.  The test
    ``a^2 ? 4b`` is done as ``a1^2 ? 4 a0 a2`` so no root is ever taken.
    """
    if spec.a2 < -1:
        raise InvalidVariance(f"a2 < -1: {spec.a2}")
    b = spec.a2
    if b == 0:
        return FamilyType.SemiCircle if spec.a1 == 0 else FamilyType.MarchenkoPastur
    if b < 0:
        return FamilyType.FreeBinomial
    disc = spec.a1 * spec.a1 - 4 * spec.a0 * spec.a2
    if disc > 0:
        return FamilyType.FreePascal
    if disc == 0:
        return FamilyType.FreeGamma
    return FamilyType.FreeHyperbolic


@dataclass(frozen=True)
class JacobiParams:
    """Eventually constant Jacobi parameters.

    ``alpha(n)`` is ``alpha_head[n]`` while available, then ``alpha_tail``.
    ``beta(n)`` for ``n >= 1`` is ``beta_head[n - 1]`` while available, then
    ``beta_tail``.  ``terminates_at`` is the first ``n`` with ``beta(n) == 0``;
    the measure then has exactly that many atoms.
    """

    alpha_head: tuple
    alpha_tail: Fraction
    beta_head: tuple
    beta_tail: Fraction
    terminates_at: Optional[int] = field(default=None)

    def __post_init__(self):
        ah = tuple(_frac(a) for a in self.alpha_head)
        bh = tuple(_frac(b) for b in self.beta_head)
        at, bt = _frac(self.alpha_tail), _frac(self.beta_tail)
        object.__setattr__(self, "alpha_head", ah)
        object.__setattr__(self, "beta_head", bh)
        object.__setattr__(self, "alpha_tail", at)
        object.__setattr__(self, "beta_tail", bt)

        term = None
        for i, b in enumerate(bh):
            if b == 0:
                term = i + 1
                break
            if b < 0:
                raise NotPositiveDefinite(f"beta({i + 1}) = {b} is negative")
        if term is None:
            if bt < 0:
                raise NotPositiveDefinite(f"beta tail {bt} is negative")
            if bt == 0:
                term = len(bh) + 1
        if self.terminates_at is not None and self.terminates_at != term:
            raise ValueError(
                f"terminates_at={self.terminates_at} inconsistent with betas (first zero at {term})"
            )
        object.__setattr__(self, "terminates_at", term)

    def alpha(self, n: int) -> Fraction:
        return self.alpha_head[n] if n < len(self.alpha_head) else self.alpha_tail

    def beta(self, n: int) -> Fraction:
        if n < 1:
            raise IndexError("beta is indexed from 1")
        if self.terminates_at is not None and n >= self.terminates_at:
            return Fraction(0)
        return self.beta_head[n - 1] if n <= len(self.beta_head) else self.beta_tail

    @property
    def tail_start(self) -> int:
        """Smallest K with alpha(k) = alpha_tail and beta(k+1) = beta_tail for k >= K."""
        return max(len(self.alpha_head), len(self.beta_head))

    def beta_product(self, n: int) -> Fraction:
        """``beta(1) * ... * beta(n)``, the squared norm of the monic ``T_n``."""
        out = Fraction(1)
        for k in range(1, n + 1):
            out *= self.beta(k)
        return out

    def matrix(self, size: int) -> np.ndarray:
        """Symmetric ``size x size`` truncation of the Jacobi matrix (floats)."""
        d = np.array([float(self.alpha(k)) for k in range(size)])
        e = np.sqrt([float(self.beta(k)) for k in range(1, size)])
        return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


def jacobi_from_quadratic(spec: VarianceSpec) -> JacobiParams:
    """Jacobi parameters of the generating measure for ``spec``.

    Matching powers of ``m`` in ``sum (x - m) m^n P_n = sum V(m) m^(n-1) P_n``
    gives ``x P_0 = a0 P_1``, ``x P_1 = a1 P_1 + a0 P_2 + P_0`` and
    ``x P_n = (1 + a2) P_(n-1) + a1 P_n + a0 P_(n+1)`` for ``n >= 2``.
    Rescaling to monic ``T_n = a0^n P_n`` yields the parameters below.
    """
    a0, a1, a2 = spec.coeffs
    tail = a0 * (1 + a2)
    if tail == 0:
        return JacobiParams((Fraction(0),), a1, (a0, Fraction(0)), Fraction(0))
    return JacobiParams((Fraction(0),), a1, (a0,), tail)


@dataclass(frozen=True)
class MomentSequence:
    """Exact moments ``gamma[k] = integral of x^k`` for ``k = 0..N``."""

    gamma: tuple

    def __post_init__(self):
        g = tuple(Fraction(v) for v in self.gamma)
        object.__setattr__(self, "gamma", g)
        if not g or g[0] != 1:
            raise ValueError("gamma_0 must equal 1 for a probability measure")
        if len(g) > 1 and g[1] != 0:
            raise ValueError("gamma_1 must vanish (mean-zero measure)")

    def __len__(self):
        return len(self.gamma)

    def __getitem__(self, k):
        return self.gamma[k]

    @property
    def order(self) -> int:
        return len(self.gamma) - 1


def moments_from_jacobi(j: JacobiParams, upto: int) -> MomentSequence:
    """Moments ``gamma_0 .. gamma_upto``, i.e. ``(J^k)_00``.

    Multiplication by ``x`` acts on the monic basis by
    ``x T_n = T_(n+1) + alpha_n T_n + beta_n T_(n-1)``; starting from
    ``T_0 = 1`` the moment is the ``T_0`` coordinate of ``x^k``.
    """
    if upto < 0:
        raise ValueError("upto must be non-negative")
    size = upto + 2
    alpha = [j.alpha(n) for n in range(size)]
    beta = [Fraction(0)] + [j.beta(n) for n in range(1, size)]
    c = [Fraction(0)] * size
    c[0] = Fraction(1)
    gamma = [Fraction(1)]
    for k in range(1, upto + 1):
        # coordinates above upto - k can no longer return to T_0
        reach = min(k, upto - k)
        new = [Fraction(0)] * size
        for n in range(reach + 1):
            v = alpha[n] * c[n] + beta[n + 1] * c[n + 1]
            if n > 0:
                v += c[n - 1]
            new[n] = v
        c = new
        gamma.append(c[0])
    return MomentSequence(tuple(gamma))


@dataclass(frozen=True)
class SupportInfo:
    """Outcome of :func:`validate_measure`."""

    hankel: "object"
    ac_support: Optional[tuple[float, float]]
    atoms: tuple  # ((location, weight), ...)

    @property
    def lower(self) -> float:
        pts = [x for x, _ in self.atoms]
        if self.ac_support is not None:
            pts.append(self.ac_support[0])
        return min(pts)

    @property
    def upper(self) -> float:
        pts = [x for x, _ in self.atoms]
        if self.ac_support is not None:
            pts.append(self.ac_support[1])
        return max(pts)


def ac_support(j: JacobiParams) -> Optional[tuple[float, float]]:
    """Absolutely continuous support ``alpha_tail -/+ 2 sqrt(beta_tail)``."""
    if j.terminates_at is not None:
        return None
    half = 2.0 * math.sqrt(float(j.beta_tail))
    a = float(j.alpha_tail)
    return (a - half, a + half)


def finite_atoms(j: JacobiParams) -> tuple:
    """Atoms of a terminating Jacobi sequence: Gauss rule of full size."""
    if j.terminates_at is None:
        raise ValueError("measure has an absolutely continuous part")
    nodes, vecs = np.linalg.eigh(j.matrix(j.terminates_at))
    return tuple((float(x), float(v * v)) for x, v in zip(nodes, vecs[0]))


def validate_measure(j: JacobiParams, depth: int) -> SupportInfo:
    """Hankel positivity to ``depth`` plus support endpoints and atoms."""
    from .oracle import hankel_positivity
    from .transforms import atoms

    if depth < 1:
        raise ValueError("depth must be >= 1")
    moments = moments_from_jacobi(j, 2 * depth - 2)
    verdict = hankel_positivity(moments, depth)
    if verdict.negative_at is not None:
        raise NotPositiveDefinite(
            f"Hankel determinant of order {verdict.negative_at} is negative"
        )
    if j.terminates_at is not None:
        return SupportInfo(verdict, None, finite_atoms(j))
    return SupportInfo(verdict, ac_support(j), atoms(j))


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a non-negative rational, or None if irrational."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def dilate(spec: VarianceSpec, s: Fraction) -> VarianceSpec:
    """Pseudo-variance of the image measure under ``x -> s x``."""
    s = Fraction(s)
    return VarianceSpec(spec.a0 * s * s, spec.a1 * s, spec.a2)


__all__ = [
    "VarianceSpec",
    "FamilyType",
    "TABLE_SPECS",
    "classify_family",
    "JacobiParams",
    "jacobi_from_quadratic",
    "MomentSequence",
    "moments_from_jacobi",
    "SupportInfo",
    "ac_support",
    "finite_atoms",
    "validate_measure",
    "rational_sqrt",
    "dilate",
]
