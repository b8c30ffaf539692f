"""Quadratic Cauchy-Stieltjes kernel families, their polynomials and checks."""

from __future__ import annotations

from .characterization import VerifyReport, run_suite
from .errors import (
    CSKError,
    DegenerateDenominator,
    ExcludedPoint,
    InsufficientMoments,
    InvalidVariance,
    NotPositiveDefinite,
    OutOfDomain,
    OutOfGuard,
    PoleHit,
    TerminatedSequence,
)
from .measures import (
    TABLE_SPECS,
    FamilyType,
    JacobiParams,
    MomentSequence,
    VarianceSpec,
    classify_family,
    jacobi_from_quadratic,
    moments_from_jacobi,
)
from .polynomials import (
    PolyKind,
    PolySequence,
    assoc_from_density,
    assoc_from_recurrence,
    monic_sequence,
)
from .transforms import cauchy_transform, domain_of_means, psi

__version__ = "0.1.0"
