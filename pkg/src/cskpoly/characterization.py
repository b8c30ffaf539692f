"""Executable checks of the characterization of quadratic CSK families.

Each check returns a :class:`VerifyReport`.  Exact checks run over
``Fraction`` and pass only on a literal zero residual; floating checks
compare against a recorded tolerance.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import _poly
from .errors import OutOfGuard
from .measures import (
    TABLE_SPECS,
    JacobiParams,
    MomentSequence,
    VarianceSpec,
    ac_support,
    classify_family,
    finite_atoms,
    jacobi_from_quadratic,
    moments_from_jacobi,
)
from .oracle import gram_matrix, integrate_poly
from .polynomials import (
    PolySequence,
    assoc_from_density,
    assoc_from_variance_series,
    convergence_guard,
    g_kernel,
    monic_sequence,
    pointwise_radius,
)
from .transforms import cauchy_transform, domain_of_means, psi, pseudo_variance_series

DEFAULT_TOL = 1e-8

# Perturbed Jacobi parameters: beta_2 = 2 breaks the constant tail required
# of every free Meixner law, so the pseudo-variance is not quadratic.
COUNTEREXAMPLE_JACOBI = JacobiParams((0,), 0, (1, 2), 1)

DILATED_SEMICIRCLE = VarianceSpec(4, 0, 0)


@dataclass(frozen=True)
class VerifyReport:
    check_id: str
    passed: bool
    residual: float
    tolerance: float
    exact: bool
    witness: Optional[dict] = field(default=None)

    def __post_init__(self):
        expected = self.residual == 0 if self.exact else self.residual <= self.tolerance
        if self.passed != expected:
            raise ValueError(f"{self.check_id}: passed flag inconsistent with residual")

    @classmethod
    def exact_check(cls, check_id: str, residual, witness=None) -> VerifyReport:
        r = float(abs(residual))
        # a nonzero Fraction below float resolution must still fail
        if residual != 0 and r == 0.0:
            r = 5e-324
        return cls(check_id, r == 0.0, r, 0.0, True, witness)

    @classmethod
    def float_check(cls, check_id: str, residual: float, tol: float, witness=None) -> VerifyReport:
        r = float(residual)
        return cls(check_id, bool(r <= tol), r, tol, False, witness)

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "exact": self.exact,
            "witness": self.witness,
        }


def label(spec: VarianceSpec) -> str:
    return f"{classify_family(spec).value}({spec.a0},{spec.a1},{spec.a2})"


def _coeffs(p) -> list:
    return [str(c) for c in p]


def _max_abs(values: Iterable) -> Fraction:
    return max((abs(Fraction(v)) for v in values), default=Fraction(0))


def _poly_gap(p, q) -> Fraction:
    return _max_abs(_poly.sub(p, q))


def check_orthogonality(spec: VarianceSpec, N: int) -> VerifyReport:
    j = jacobi_from_quadratic(spec)
    polys = assoc_from_density(spec, N)
    moments = moments_from_jacobi(j, 2 * len(polys))
    gram = gram_matrix(polys, moments)
    off = [(i, k, v) for i, k, v in gram.off_diagonal() if v != 0]
    diag = gram.diagonal()
    residual = _max_abs(v for _, _, v in off)
    bad_diag = [n for n, d in enumerate(diag) if d <= 0]
    if bad_diag:
        residual = max(residual, Fraction(1))  # indicator: a norm is not positive
    beta1_gap = abs(diag[1] - 1 / spec.a0) if len(diag) > 1 else Fraction(0)
    residual = max(residual, beta1_gap)
    witness = {
        "norms": _coeffs(diag),
        "beta_1": str(diag[1]) if len(diag) > 1 else None,
        "one_over_a0": str(1 / spec.a0),
        "size": len(polys),
        "terminated_at": polys.terminated_at,
    }
    if off:
        i, k, v = off[0]
        witness["first_nonzero"] = {"i": i, "j": k, "value": str(v)}
    if bad_diag:
        witness["nonpositive_norms"] = bad_diag
    return VerifyReport.exact_check(f"orthogonality:{label(spec)}", residual, witness)


def _corrected_relation(spec: VarianceSpec, rows, n: int):
    a0, a1, a2 = spec.coeffs
    lhs = _poly.mulx(rows[n])
    rhs = _poly.add(_poly.scale(rows[n], a1), _poly.scale(rows[n + 1], a0))
    if n == 1:
        rhs = _poly.add(rhs, rows[0])
    elif n >= 2:
        rhs = _poly.add(rhs, _poly.scale(rows[n - 1], 1 + a2))
    else:
        rhs = _poly.scale(rows[1], a0)
    return lhs, rhs


def check_recurrence(spec: VarianceSpec, N: int) -> VerifyReport:
    """Corrected three-term relation on density-built ``P_n``, n <= N - 1.

    The witness also carries the verbatim form of the relation at ``n = 1``,
    ``x P_1 = (1 + a2) P_0 + a1 P_1 + a0 P_2``, which only holds if a2 = 0.
    """
    a0, a1, a2 = spec.coeffs
    rows = assoc_from_density(spec, N).coeffs
    residual = Fraction(0)
    failures = []
    checked = []
    for n in range(0, min(N, len(rows) - 1)):
        lhs, rhs = _corrected_relation(spec, rows, n)
        gap = _poly_gap(lhs, rhs)
        checked.append(n)
        if gap:
            failures.append(n)
        residual = max(residual, gap)
    witness: dict = {"checked_indices": checked, "failing_indices": failures}
    if len(rows) > 2:
        p1 = rows[1]
        p2_verbatim = _poly.scale(
            _poly.sub(_poly.sub(_poly.mulx(p1), _poly.scale(p1, a1)), _poly.scale(rows[0], 1 + a2)),
            1 / a0,
        )
        witness["verbatim_n1"] = {
            "holds": p2_verbatim == rows[2],
            "P2": _coeffs(rows[2]),
            "P2_from_verbatim_relation": _coeffs(p2_verbatim),
            "constant_term": str(rows[2][0]),
            "verbatim_constant_term": str(p2_verbatim[0]),
        }
    return VerifyReport.exact_check(f"recurrence:{label(spec)}", residual, witness)


def check_th2_scaling(spec: VarianceSpec, N: int) -> VerifyReport:
    """Monic ``T_n`` (from Jacobi) against ``a0^n P_n`` (from the density)."""
    j = jacobi_from_quadratic(spec)
    t = monic_sequence(j, N, spec)
    p = assoc_from_density(spec, N)
    residual = Fraction(0)
    first = None
    for n in range(min(len(t), len(p))):
        gap = _poly_gap(t[n], _poly.scale(p[n], spec.a0**n))
        if gap and first is None:
            first = n
        residual = max(residual, gap)
    witness = {"t": str(spec.a0), "rows": min(len(t), len(p)), "first_mismatch": first}
    return VerifyReport.exact_check(f"th2_scaling:{label(spec)}", residual, witness)


def support_grid(j: JacobiParams, points: int = 11) -> list[float]:
    if j.terminates_at is not None:
        return [x for x, _ in finite_atoms(j)]
    lo, hi = ac_support(j)
    return [float(x) for x in np.linspace(lo, hi, points)]


def default_z_grid(spec: VarianceSpec) -> list[float]:
    zmax = 0.2 * convergence_guard(spec) / float(spec.a0)
    return [zmax * s for s in (-1.0, -0.5, 0.5, 1.0)]


def gf_kernel_rhs(spec: VarianceSpec, j: JacobiParams, x: float, z: float) -> float:
    """``1 / (u(z) (f(z) - x))`` with ``f = 1/psi(t z)`` and ``u = G(f)``."""
    t = float(spec.a0)
    f = 1.0 / psi(spec, t * z)
    u = float(np.real(cauchy_transform(j, f)))
    return 1.0 / (u * (f - x))


def check_gf_kernel(
    spec: VarianceSpec,
    points: Optional[Sequence[tuple[float, float]]] = None,
    N: int = 30,
    tol: float = DEFAULT_TOL,
) -> VerifyReport:
    """``sum_(n <= N) T_n(x) z^n`` against the Cauchy-Stieltjes kernel form."""
    j = jacobi_from_quadratic(spec)
    if points is None:
        points = [(x, z) for x in support_grid(j) for z in default_z_grid(spec)]
    dom = domain_of_means(j)
    radius = pointwise_radius(spec, max(abs(dom.A), abs(dom.B)))
    t = float(spec.a0)
    for _, z in points:
        if abs(t * z) >= radius:
            raise OutOfGuard(f"|t z| = {abs(t * z)} not below radius bound {radius}")
    T = monic_sequence(j, N, spec)
    residual = 0.0
    worst = None
    for x, z in points:
        if z == 0:
            lhs, rhs = 1.0, 1.0
        else:
            lhs = sum(_poly.evaluate(T[n], x) * z**n for n in range(len(T)))
            rhs = gf_kernel_rhs(spec, j, x, z)
        err = abs(lhs - rhs)
        if worst is None or err > residual:
            residual, worst = err, {"x": x, "z": z, "series": lhs, "kernel": rhs}
    z_lim = 1e-10
    f_lim = 1.0 / psi(spec, t * z_lim)
    u_lim = float(np.real(cauchy_transform(j, f_lim)))
    limits = {"u_over_z": u_lim / z_lim, "z_times_f": z_lim * f_lim, "z": z_lim}
    residual = max(residual, abs(limits["u_over_z"] - 1), abs(limits["z_times_f"] - 1))
    witness = {"worst": worst, "limits": limits, "terms": N, "points": len(points)}
    return VerifyReport.float_check(f"gf_kernel:{label(spec)}", residual, tol, witness)


def radius_bound_check(spec: VarianceSpec, N: int) -> VerifyReport:
    """``b_n = int T_n^2 <= gamma_(2n)`` exactly, plus the implied series bound."""
    j = jacobi_from_quadratic(spec)
    T = monic_sequence(j, N, spec)
    moments = moments_from_jacobi(j, 2 * N)
    b = [integrate_poly(_poly.mul(T[n], T[n]), moments) for n in range(len(T))]
    g = [moments[2 * n] for n in range(len(T))]
    residual = _max_abs(max(Fraction(0), bn - gn) for bn, gn in zip(b, g))
    dom = domain_of_means(j)
    r = min(abs(dom.theta_minus), dom.theta_plus)
    z = r / 2
    witness = {
        "b": _coeffs(b),
        "gamma_even": _coeffs(g),
        "r": r,
        "sum_b": sum(float(bn) * z ** (2 * n) for n, bn in enumerate(b)),
        "sum_gamma": sum(float(gn) * z ** (2 * n) for n, gn in enumerate(g)),
    }
    return VerifyReport.exact_check(f"radius:{label(spec)}", residual, witness)


def mean_annihilation(check_id: str, polys: PolySequence, moments: MomentSequence) -> VerifyReport:
    values = [integrate_poly(polys[n], moments) for n in range(1, len(polys))]
    witness = {"integrals": _coeffs(values)}
    return VerifyReport.exact_check(check_id, _max_abs(values), witness)


def check_mean_annihilation(spec: VarianceSpec, N: int) -> VerifyReport:
    j = jacobi_from_quadratic(spec)
    polys = assoc_from_density(spec, N)
    return mean_annihilation(
        f"mean_annihilation:{label(spec)}", polys, moments_from_jacobi(j, N)
    )


def counterexample_polys(N: int = 6, order: int = 12):
    """Series pseudo-variance and ``P_0..P_N`` of the perturbed measure."""
    v = pseudo_variance_series(COUNTEREXAMPLE_JACOBI, order)
    polys = assoc_from_variance_series(v.coeffs, N)
    return v, polys


def counterexample_suite(N: int = 6, order: int = 12) -> VerifyReport:
    """Non-quadratic pseudo-variance must break orthogonality of ``P_0..P_N``.

    Passes when the Gram matrix has a nonzero off-diagonal entry, the series
    ``V`` has a nonzero coefficient beyond degree 2, and nothing
    is hidden by truncation (order ``order + 4`` reproduces every Gram entry).
    """
    moments = moments_from_jacobi(COUNTEREXAMPLE_JACOBI, 2 * N)
    v, polys = counterexample_polys(N, order)
    gram = gram_matrix(polys, moments)
    _, polys_hi = counterexample_polys(N, order + 4)
    stable = gram_matrix(polys_hi, moments) == gram
    off = [(i, k, e) for i, k, e in gram.off_diagonal() if e != 0]
    higher = [(k, c) for k, c in enumerate(v.coeffs) if k > 2 and c != 0]
    ok = bool(off) and bool(higher) and stable and v[0] == moments[2]
    witness = {
        "V_series": _coeffs(v.coeffs),
        "V0_equals_gamma2": v[0] == moments[2],
        "first_higher_V_coefficient": {"k": higher[0][0], "value": str(higher[0][1])} if higher else None,
        "first_nonzero_offdiagonal": {"i": off[0][0], "j": off[0][1], "value": str(off[0][2])} if off else None,
        "nonzero_offdiagonal_count": len(off),
        "truncation_stable": stable,
        "truncation_order": order,
    }
    return VerifyReport.exact_check("counterexample:non_orthogonality", 0 if ok else 1, witness)


def counterexample_mean_annihilation(N: int = 10) -> VerifyReport:
    _, polys = counterexample_polys(N, max(12, N))
    moments = moments_from_jacobi(COUNTEREXAMPLE_JACOBI, N)
    return mean_annihilation("counterexample:mean_annihilation", polys, moments)


def check_gkernel_consistency(
    spec: VarianceSpec, N: int = 20, tol: float = 1e-10, bound: float = 0.2
) -> VerifyReport:
    """Closed-form ``g`` against ``sum (m mt)^n beta_n`` with Gram-derived norms."""
    j = jacobi_from_quadratic(spec)
    polys = assoc_from_density(spec, N)
    norms = gram_matrix(polys, moments_from_jacobi(j, 2 * len(polys))).diagonal()
    grid = np.linspace(-bound, bound, 5)
    residual, worst = 0.0, None
    for m in grid:
        for mt in grid:
            series = sum(float(b) * float(m * mt) ** n for n, b in enumerate(norms))
            closed = g_kernel(spec, float(m), float(mt))
            err = abs(series - closed)
            if worst is None or err > residual:
                residual, worst = err, {"m": float(m), "mt": float(mt), "closed": closed, "series": series}
    witness = {"worst": worst, "terms": len(norms)}
    return VerifyReport.float_check(f"g_kernel:{label(spec)}", residual, tol, witness)


SUITES = ("all", "orthogonality", "recurrence", "th2", "gfkernel", "radius",
          "counterexample", "annihilation", "gkernel")


def _jobs(suite: str, N: int, tol: float) -> list[Callable[[], VerifyReport]]:
    specs = list(TABLE_SPECS.values())
    jobs: dict[str, list] = {
        "orthogonality": [lambda s=s: check_orthogonality(s, N) for s in specs],
        "recurrence": [lambda s=s: check_recurrence(s, N) for s in specs],
        "th2": [lambda s=s: check_th2_scaling(s, N) for s in specs + [DILATED_SEMICIRCLE]],
        "gfkernel": [lambda s=s: check_gf_kernel(s, tol=tol) for s in specs],
        "radius": [lambda s=s: radius_bound_check(s, N) for s in specs],
        "annihilation": [lambda s=s: check_mean_annihilation(s, N) for s in specs],
        "gkernel": [lambda s=s: check_gkernel_consistency(s) for s in specs],
        "counterexample": [counterexample_suite, lambda: counterexample_mean_annihilation(N)],
    }
    if suite == "all":
        return [job for group in jobs.values() for job in group]
    if suite not in jobs:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return jobs[suite]


def run_suite(suite: str = "all", N: int = 10, tol: float = DEFAULT_TOL,
              threads: Optional[int] = None) -> list[VerifyReport]:
    """Run a named group of checks; reports come back sorted by check_id."""
    jobs = _jobs(suite, N, tol)
    if threads is None:
        threads = int(os.environ.get("CSKPOLY_THREADS", "1") or 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda job: job(), jobs))
    else:
        reports = [job() for job in jobs]
    return sorted(reports, key=lambda r: r.check_id)
