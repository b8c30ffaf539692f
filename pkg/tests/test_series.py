from __future__ import annotations

from fractions import Fraction

import pytest

from cskpoly.measures import TABLE_SPECS, JacobiParams, VarianceSpec, jacobi_from_quadratic
from cskpoly.series import PowerSeries
from cskpoly.transforms import mean_map_series, psi_series, pseudo_variance_series


def test_arithmetic():
    a = PowerSeries([1, 2, 3], 4)
    b = PowerSeries([1, -1], 4)
    assert (a * b).coeffs == (1, 1, 1, -3, 0)
    assert ((a / b) * b).coeffs == a.coeffs
    assert (a * a.inverse()).coeffs == (1, 0, 0, 0, 0)


def test_reversion_of_geometric():
    # t / (1 + t) has inverse s / (1 - s)
    f = PowerSeries([0, 1, -1, 1, -1, 1, -1], 6)
    assert f.reversion().coeffs == (0, 1, 1, 1, 1, 1, 1)


def test_reversion_round_trip():
    f = PowerSeries([0, 2, Fraction(1, 3), -1, 5], 7)
    g = f.reversion()
    assert f.compose(g).coeffs == (0, 1, 0, 0, 0, 0, 0, 0)


def test_reversion_requires_simple_zero():
    with pytest.raises(ValueError):
        PowerSeries([1, 1], 3).reversion()
    with pytest.raises(ValueError):
        PowerSeries([0, 0, 1], 3).reversion()


@pytest.mark.parametrize("spec", list(TABLE_SPECS.values()) + [VarianceSpec(3, -1, 2)])
def test_pseudo_variance_series_recovers_quadratic(spec):
    v = pseudo_variance_series(jacobi_from_quadratic(spec), 10)
    assert v.coeffs == (spec.a0, spec.a1, spec.a2) + (0,) * 8


def test_psi_series_inverts_mean_map(table_spec):
    k = mean_map_series(jacobi_from_quadratic(table_spec), 8)
    assert k.compose(psi_series(table_spec, 8)).coeffs == (0, 1) + (0,) * 7


def test_counterexample_pseudo_variance_frozen():
    # independent sympy oracle: 1 + m^2 - 2 m^4 + 4 m^6 - 10 m^8
    v = pseudo_variance_series(JacobiParams((0,), 0, (1, 2), 1), 8)
    assert v.coeffs == (1, 0, 1, 0, -2, 0, 4, 0, -10)
