"""Truncated power series with exact rational coefficients.

``PowerSeries(coeffs, order)`` stands for ``sum(c[k] * t**k for k <= order)``;
coefficients above ``order`` are unknown, not zero.  Arithmetic between
series of different orders truncates to the lower one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable


class PowerSeries:
    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        c = [Fraction(v) for v in coeffs]
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        c = c[: order + 1]
        c += [Fraction(0)] * (order + 1 - len(c))
        self.coeffs = tuple(c)
        self.order = order

    def __getitem__(self, k: int) -> Fraction:
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond truncation order {self.order}")
        return self.coeffs[k]

    def __repr__(self):
        return f"PowerSeries({[str(c) for c in self.coeffs]}, order={self.order})"

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def _coerce(self, other) -> PowerSeries:
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries([other], self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return PowerSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], n)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries([a * Fraction(other) for a in self.coeffs], self.order)
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return PowerSeries(out, n)

    __rmul__ = __mul__

    def inverse(self) -> PowerSeries:
        """Multiplicative inverse; the constant term must be nonzero."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not a unit")
        out = [Fraction(0)] * (self.order + 1)
        out[0] = 1 / c0
        for n in range(1, self.order + 1):
            s = sum(self.coeffs[k] * out[n - k] for k in range(1, n + 1))
            out[n] = -s / c0
        return PowerSeries(out, self.order)

    def __truediv__(self, other):
        if not isinstance(other, PowerSeries):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def shift_down(self) -> PowerSeries:
        """Divide by t, dropping the constant term (which must vanish)."""
        if self.coeffs[0] != 0:
            raise ValueError("constant term must vanish to divide by t")
        return PowerSeries(self.coeffs[1:], self.order - 1)

    def shift_up(self) -> PowerSeries:
        """Multiply by t."""
        return PowerSeries((Fraction(0),) + self.coeffs, self.order + 1)

    def __pow__(self, k: int) -> PowerSeries:
        out = PowerSeries([1], self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def compose(self, inner: PowerSeries) -> PowerSeries:
        """``self(inner(t))``; ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        acc = PowerSeries([self.coeffs[n]], n)
        inner = PowerSeries(inner.coeffs, n)
        for k in range(n - 1, -1, -1):
            acc = acc * inner + self.coeffs[k]
        return acc

    def reversion(self) -> PowerSeries:
        """Compositional inverse by Lagrange inversion.

        For ``self = c1 t + c2 t^2 + ...`` with ``c1 != 0`` returns ``g`` with
        ``self(g(s)) = s``, using ``[s^n] g = (1/n) [t^(n-1)] (t/self)^n``.
        """
        if self.coeffs[0] != 0 or self.order < 1 or self.coeffs[1] == 0:
            raise ValueError("reversion needs zero constant and nonzero linear term")
        n = self.order
        ratio = self.shift_down().inverse()  # t / self(t), order n-1
        out = [Fraction(0)] * (n + 1)
        power = PowerSeries([1], n - 1)
        for k in range(1, n + 1):
            power = power * ratio
            out[k] = power[k - 1] / k
        return PowerSeries(out, n)

    def evaluate(self, t):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * t + (a if isinstance(t, Fraction) else float(a))
        return acc
