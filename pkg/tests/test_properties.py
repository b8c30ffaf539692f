from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from cskpoly.measures import VarianceSpec, jacobi_from_quadratic, moments_from_jacobi
from cskpoly.oracle import gram_matrix, hankel_positivity, integrate_poly
from cskpoly.polynomials import assoc_from_density, assoc_from_recurrence, g_kernel, monic_sequence
from cskpoly import _poly

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=6)
specs = st.builds(
    VarianceSpec,
    st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=6).filter(lambda v: v > 0),
    rationals,
    st.fractions(min_value=Fraction(-3, 4), max_value=3, max_denominator=6),
)


@settings(max_examples=40, deadline=None)
@given(specs)
def test_quadratic_specs_are_orthogonal(spec):
    j = jacobi_from_quadratic(spec)
    p = assoc_from_density(spec, 6)
    g = gram_matrix(p, moments_from_jacobi(j, 12))
    assert g.is_diagonal()
    assert all(d > 0 for d in g.diagonal())


@settings(max_examples=40, deadline=None)
@given(specs)
def test_routes_agree_and_scale(spec):
    p = assoc_from_density(spec, 7)
    assert p.coeffs == assoc_from_recurrence(spec, 7).coeffs
    t = monic_sequence(jacobi_from_quadratic(spec), 7)
    for n in range(8):
        assert t[n] == _poly.scale(p[n], spec.a0**n)


@settings(max_examples=40, deadline=None)
@given(specs)
def test_hankel_positive_and_mean_zero(spec):
    moments = moments_from_jacobi(jacobi_from_quadratic(spec), 12)
    assert hankel_positivity(moments, 7).positive
    p = assoc_from_density(spec, 6)
    assert all(integrate_poly(p[n], moments) == 0 for n in range(1, 7))


@settings(max_examples=60, deadline=None)
@given(specs, st.fractions(min_value=Fraction(-1, 10), max_value=Fraction(1, 10), max_denominator=20),
       st.fractions(min_value=Fraction(-1, 10), max_value=Fraction(1, 10), max_denominator=20))
def test_g_kernel_symmetric(spec, m, mt):
    if m == mt:
        return
    assert g_kernel(spec, m, mt) == g_kernel(spec, mt, m)
