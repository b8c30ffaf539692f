"""Dense univariate polynomials over the rationals.

A polynomial is a tuple of coefficients in increasing degree, with no
trailing zeros (the zero polynomial is the empty tuple).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest
from typing import Sequence

Poly = tuple

ZERO: Poly = ()
ONE: Poly = (Fraction(1),)
X: Poly = (Fraction(0), Fraction(1))


def trim(c: Sequence) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def const(v) -> Poly:
    return trim((Fraction(v),))


def add(p: Poly, q: Poly) -> Poly:
    return trim(a + b for a, b in zip_longest(p, q, fillvalue=Fraction(0)))


def sub(p: Poly, q: Poly) -> Poly:
    return trim(a - b for a, b in zip_longest(p, q, fillvalue=Fraction(0)))


def scale(p: Poly, s) -> Poly:
    return trim(a * s for a in p)


def mulx(p: Poly) -> Poly:
    return (Fraction(0),) + tuple(p) if p else ZERO


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def deriv(p: Poly) -> Poly:
    return trim(k * a for k, a in enumerate(p) if k > 0)


def degree(p: Poly) -> int:
    return len(p) - 1


def evaluate(p: Poly, x):
    """Horner evaluation; ``x`` may be a Fraction, float or complex."""
    acc = 0
    for a in reversed(p):
        acc = acc * x + (a if isinstance(x, Fraction) else float(a))
    return acc


def padded(p: Poly, length: int) -> tuple:
    return tuple(p) + (Fraction(0),) * (length - len(p))
