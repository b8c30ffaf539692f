"""Exception types raised across the package."""

from __future__ import annotations


class CSKError(Exception):
    """Base class for all errors raised by cskpoly."""


class InvalidVariance(CSKError, ValueError):
    """Pseudo-variance coefficients do not describe a probability measure."""


class NotPositiveDefinite(CSKError, ValueError):
    """A Hankel determinant of the moment sequence is negative."""


class InsufficientMoments(CSKError, ValueError):
    """The moment sequence is too short for the requested integral."""


class OutOfDomain(CSKError, ValueError):
    """A parameter lies outside the domain of means or of theta."""


class DegenerateDenominator(CSKError, ZeroDivisionError):
    """A closed form has a vanishing denominator at the requested point."""


class ExcludedPoint(CSKError, ValueError):
    """The point z = m + V(m)/m where the Q_m transform formula is singular."""


class OutOfGuard(CSKError, ValueError):
    """A generating-function argument lies beyond the convergence bound."""


class PoleHit(CSKError, ZeroDivisionError):
    """The Cauchy transform was evaluated exactly at an atom."""

    def __init__(self, location):
        super().__init__(f"Cauchy transform has a pole at z={location!r}")
        self.location = location


class TerminatedSequence(CSKError, IndexError):
    """Requested index lies past the end of a finitely supported measure."""
