from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from cskpoly.errors import InsufficientMoments, TerminatedSequence
from cskpoly.measures import VarianceSpec, jacobi_from_quadratic, moments_from_jacobi
from cskpoly.oracle import (
    determinant,
    gauss_rule,
    gram_matrix,
    hankel,
    hankel_positivity,
    integrate_poly,
)
from cskpoly.polynomials import assoc_from_density, monic_sequence

SEMI = jacobi_from_quadratic(VarianceSpec(1, 0, 0))


def test_integrate_examples():
    moments = moments_from_jacobi(SEMI, 4)
    assert integrate_poly([1], moments) == 1
    assert integrate_poly([0, 0, 1], moments) == 1
    assert integrate_poly([-1, 0, 1], moments) == 0
    with pytest.raises(InsufficientMoments):
        integrate_poly([0] * 6 + [1], moments)


def test_gram_examples():
    spec = VarianceSpec(1, 0, 0)
    g = gram_matrix(assoc_from_density(spec, 3), moments_from_jacobi(SEMI, 6))
    assert g.diagonal() == (1, 1, 1, 1) and g.is_diagonal()
    spec = VarianceSpec(1, 3, 1)
    j = jacobi_from_quadratic(spec)
    g = gram_matrix(assoc_from_density(spec, 3), moments_from_jacobi(j, 6))
    assert g.diagonal() == (1, 1, 2, 4) and g.is_diagonal()
    with pytest.raises(InsufficientMoments):
        gram_matrix(assoc_from_density(spec, 3), moments_from_jacobi(j, 4))


def test_gram_beta1(table_spec):
    j = jacobi_from_quadratic(table_spec)
    g = gram_matrix(assoc_from_density(table_spec, 1), moments_from_jacobi(j, 2))
    assert g.entries[1][1] == 1 / table_spec.a0


def test_monic_gram_is_beta_product(table_spec):
    j = jacobi_from_quadratic(table_spec)
    g = gram_matrix(monic_sequence(j, 8), moments_from_jacobi(j, 16))
    assert list(g.diagonal()) == [j.beta_product(n) for n in range(9)]


def test_gram_stable_under_longer_moments(table_spec):
    j = jacobi_from_quadratic(table_spec)
    p = assoc_from_density(table_spec, 5)
    assert gram_matrix(p, moments_from_jacobi(j, 10)) == gram_matrix(p, moments_from_jacobi(j, 20))


def test_gauss_examples():
    rule = gauss_rule(SEMI, 1)
    assert list(rule.nodes) == [0] and list(rule.weights) == [1]
    rule = gauss_rule(SEMI, 2)
    assert sorted(rule.nodes) == pytest.approx([-1, 1], abs=1e-15)
    assert rule.weights == pytest.approx([0.5, 0.5], abs=1e-15)
    assert rule.integrate(lambda x: x**2) == pytest.approx(1, abs=1e-15)
    two = jacobi_from_quadratic(VarianceSpec(1, 0, -1))
    rule = gauss_rule(two, 2)
    assert sorted(rule.nodes) == pytest.approx([-1, 1], abs=1e-15)
    with pytest.raises(TerminatedSequence):
        gauss_rule(two, 3)


@pytest.mark.parametrize("N", [1, 2, 4, 8])
def test_gauss_exactness_and_negative_control(table_spec, N):
    j = jacobi_from_quadratic(table_spec)
    rule = gauss_rule(j, N)
    assert rule.weights.sum() == pytest.approx(1, abs=1e-14)
    assert np.all(rule.weights > 0)
    moments = moments_from_jacobi(j, 2 * N)
    for k in range(2 * N):
        got = rule.integrate(lambda x: x**k)
        scale = max(1.0, rule.integrate(lambda x: np.abs(x) ** k))
        assert abs(got - float(moments[k])) <= 1e-12 * scale
    miss = rule.integrate(lambda x: x ** (2 * N)) - float(moments[2 * N])
    assert abs(miss) > 1e-6


def test_determinant_matches_numpy():
    rng = np.random.default_rng(3)
    for size in (1, 3, 5):
        mat = rng.integers(-5, 6, (size, size))
        assert float(determinant(mat.tolist())) == pytest.approx(np.linalg.det(mat), abs=1e-8)
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2], [2, 4]]) == 0


def test_hankel_examples():
    v = hankel_positivity([1, 0, 1], 2)
    assert v.positive and v.determinants == (1, 1)
    v = hankel_positivity([1, 0, 1, 0, 2], 3)
    assert v.positive and v.determinants[2] == 1
    v = hankel_positivity([1, 0, -1], 2)
    assert not v.positive and v.negative_at == 2
    with pytest.raises(InsufficientMoments):
        hankel_positivity([1, 0, 1], 3)


def test_hankel_two_atom_zero_tail():
    j = jacobi_from_quadratic(VarianceSpec(1, 0, -1))
    v = hankel_positivity(moments_from_jacobi(j, 8), 5)
    assert v.positive and v.zero_from == 3
    assert hankel(list(range(5)), 2) == [[0, 1], [1, 2]]
