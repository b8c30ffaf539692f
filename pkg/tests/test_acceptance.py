"""Acceptance criteria, one test per criterion.

Each criterion prints a single ``PASS``/``FAIL`` line.  Run directly with
``python3 tests/test_acceptance.py`` for the summary alone, or under pytest
with ``-s`` to see the lines next to the test results.
"""

from __future__ import annotations

import math
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from cskpoly.characterization import (
    DILATED_SEMICIRCLE,
    check_gf_kernel,
    check_gkernel_consistency,
    check_mean_annihilation,
    check_orthogonality,
    check_recurrence,
    check_th2_scaling,
    counterexample_mean_annihilation,
    counterexample_suite,
    radius_bound_check,
)
from cskpoly.measures import TABLE_SPECS, VarianceSpec, jacobi_from_quadratic, moments_from_jacobi
from cskpoly.oracle import gauss_rule
from cskpoly.polynomials import assoc_from_density, assoc_from_recurrence, g_kernel
from cskpoly.transforms import (
    cauchy_transform_exact,
    domain_of_means,
    laurent_coefficients,
    mean_map,
    psi,
    qm_cauchy_transform,
    qm_density,
    stieltjes_density,
)

SPECS = list(TABLE_SPECS.values())
SEMI = VarianceSpec(1, 0, 0)


def _line(number: int, title: str, ok: bool, detail: str) -> bool:
    print(f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} [{detail}]")
    return ok


def criterion_1() -> bool:
    reports = [check_orthogonality(s, 10) for s in SPECS]
    worst = max(r.residual for r in reports)
    ok = all(r.passed for r in reports)
    return _line(1, "exact orthogonality, beta_1 = 1/a0", ok, f"max off-diagonal {worst}")


def criterion_2() -> bool:
    reports = [check_recurrence(s, 10) for s in SPECS]
    corrected = all(r.passed and r.witness["checked_indices"] == list(range(10)) for r in reports)
    verbatim = True
    for s, r in zip(SPECS, reports):
        v = r.witness["verbatim_n1"]
        expect_hold = s.a2 == 0
        verbatim &= v["holds"] == expect_hold
        verbatim &= v["constant_term"] == "-1" and v["verbatim_constant_term"] == str(-(1 + s.a2))
    fails = sum(not r.witness["verbatim_n1"]["holds"] for r in reports)
    return _line(2, "corrected recurrence n <= 9, verbatim n=1 documented", corrected and verbatim,
                 f"verbatim n=1 fails on {fails} specs with b != 0")


def criterion_3() -> bool:
    ok = all(assoc_from_density(s, 12).coeffs == assoc_from_recurrence(s, 12).coeffs for s in SPECS)
    return _line(3, "density route equals recurrence route, N = 12", ok, "exact")


def criterion_4() -> bool:
    scaling = [check_th2_scaling(s, 10) for s in SPECS + [DILATED_SEMICIRCLE]]
    kernel = [check_gf_kernel(s, N=30, tol=1e-8) for s in SPECS]
    worst = max(r.residual for r in kernel)
    ok = all(r.passed for r in scaling) and all(r.passed for r in kernel) and worst <= 1e-8
    return _line(4, "T_n = a0^n P_n and generating kernel", ok, f"kernel residual {worst:.3g}")


def criterion_5() -> bool:
    rng = np.random.default_rng(20261015)
    round_trip = 0.0
    for s in SPECS:
        j = jacobi_from_quadratic(s)
        dom = domain_of_means(j)
        for m in rng.uniform(dom.m_minus / 2, dom.m_plus / 2, 50):
            round_trip = max(round_trip, abs(mean_map(j, psi(s, m)) - m))
    j = jacobi_from_quadratic(SEMI)
    exact_g = all(
        cauchy_transform_exact(j, m + SEMI(m) / m) == m / SEMI(m)
        for m in (Fraction(1, 2), Fraction(1, 3), Fraction(-1, 4), Fraction(2, 3))
    )
    laurent = all(
        laurent_coefficients(jacobi_from_quadratic(s), 8) == tuple(moments_from_jacobi(jacobi_from_quadratic(s), 8))
        for s in SPECS
    )
    qm = 0.0
    for s in SPECS:
        j = jacobi_from_quadratic(s)
        dom = domain_of_means(j)
        rule = gauss_rule(j, 64)
        for m in np.linspace(dom.m_minus / 2, dom.m_plus / 2, 5):
            for z in (dom.B + 2.0, dom.A - 2.0, 1 + 1j):
                quad = np.sum(rule.weights * qm_density(s, m, rule.nodes) / (z - rule.nodes))
                qm = max(qm, abs(qm_cauchy_transform(j, s, m, z) - quad))
    ok = round_trip <= 1e-12 and exact_g and laurent and qm <= 1e-10
    return _line(5, "transform identities", ok, f"round trip {round_trip:.2g}, G_Qm {qm:.2g}")


def criterion_6() -> bool:
    reports = [check_gkernel_consistency(s, N=20, tol=1e-10, bound=0.2) for s in SPECS]
    worst = max(r.residual for r in reports)
    pts = [Fraction(1, 5), Fraction(-1, 10), Fraction(3, 20), Fraction(-1, 5)]
    special = all(g_kernel(SEMI, a, b) == 1 / (1 - a * b) for a in pts for b in pts if a != b)
    ok = all(r.passed for r in reports) and special
    return _line(6, "g-kernel closed form vs norm series", ok, f"max residual {worst:.2g}")


def criterion_7() -> bool:
    reports = [radius_bound_check(s, 8) for s in SPECS]
    semi = radius_bound_check(SEMI, 8).witness
    catalan = [math.comb(2 * n, n) // (n + 1) for n in range(9)]
    ok = all(r.passed for r in reports)
    ok &= semi["b"] == ["1"] * 9 and semi["gamma_even"] == [str(c) for c in catalan]
    return _line(7, "radius bound b_n <= gamma_2n", ok, "exact, n <= 8")


def criterion_8() -> bool:
    reports = [check_mean_annihilation(s, 10) for s in SPECS] + [counterexample_mean_annihilation(10)]
    return _line(8, "mean annihilation 1 <= n <= 10", all(r.passed for r in reports), "exact")


def criterion_9() -> bool:
    r = counterexample_suite(6)
    w = r.witness
    off = w["first_nonzero_offdiagonal"]
    higher = w["first_higher_V_coefficient"]
    ok = r.passed and off is not None and higher is not None
    detail = f"Gram[{off['i']}][{off['j']}] = {off['value']}, V_{higher['k']} = {higher['value']}" if ok else "none"
    return _line(9, "negative control is non-orthogonal", ok, detail)


def criterion_10() -> bool:
    semi_j = jacobi_from_quadratic(SEMI)
    moments_ok = list(moments_from_jacobi(semi_j, 8)) == [1, 0, 1, 0, 2, 0, 5, 0, 14]
    dom = domain_of_means(semi_j)
    means_ok = abs(dom.m_minus + 1) <= 1e-12 and abs(dom.m_plus - 1) <= 1e-12
    mp = domain_of_means(jacobi_from_quadratic(VarianceSpec(1, 1, 0)))
    mp_ok = abs(mp.m_plus - 1) <= 1e-12
    dens = abs(stieltjes_density(semi_j, 0.0) - 1 / math.pi)
    gauss = 0.0
    for s in SPECS:
        j = jacobi_from_quadratic(s)
        for N in (1, 2, 4, 8, 12):
            rule = gauss_rule(j, N)
            moments = moments_from_jacobi(j, 2 * N - 1)
            for k in range(2 * N):
                scale = max(1.0, rule.integrate(lambda x: np.abs(x) ** k))
                gauss = max(gauss, abs(rule.integrate(lambda x: x**k) - float(moments[k])) / scale)
    ok = moments_ok and means_ok and mp_ok and dens <= 1e-4 and gauss <= 1e-12
    return _line(10, "numerics: moments, means, density, Gauss", ok,
                 f"density error {dens:.2g}, Gauss relative error {gauss:.2g}")


def criterion_11() -> bool:
    cmd = [sys.executable, "-m", "cskpoly.cli"]
    first = subprocess.run(cmd + ["verify", "--suite", "all"], capture_output=True)
    second = subprocess.run(cmd + ["verify", "--suite", "all"], capture_output=True)
    bad = subprocess.run(cmd + ["family", "--a0", "1", "--a1", "0", "--a2", "-2"], capture_output=True)
    ok = (first.returncode == 0 and second.returncode == 0 and first.stdout == second.stdout
          and bad.returncode == 2)
    return _line(11, "CLI determinism and exit codes", ok,
                 f"exits {first.returncode}/{second.returncode}/{bad.returncode}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
