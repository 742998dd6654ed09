"""Maclaurin solvers, the majorant bound and the confluence gaps."""
import cmath
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p3confluence.series import (
    ScaledParams,
    ZeroInitialValue,
    confluence_gap,
    d6_series,
    d8_series,
    empirical_majorant_radius,
    majorant_branch_point,
    majorant_coeffs,
    majorant_radius,
    series_coeffs,
    u0_of_m,
)
from p3confluence.umemura import un_zero_backlund

# sympy solution of the D8 equation order by order with U(0) = 1
D8_ONE = [F(1), F(8), F(32), F(1024, 9), F(3584, 9), F(32768, 25), F(8536064, 2025)]


def test_d8_exact_coefficients():
    assert series_coeffs(F(1), ScaledParams(F(4), F(4), F(0), F(0)), 6) == D8_ONE


def test_zero_initial_value_rejected():
    with pytest.raises(ZeroInitialValue):
        series_coeffs(0, ScaledParams.d8(), 4)


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(min_magnitude=0.2, max_magnitude=4, allow_nan=False, allow_infinity=False))
def test_d8_residual_inside_radius(U0):
    s = d8_series(U0, 60)
    z = 0.5 * s.radiusBound * cmath.exp(0.7j)
    scale = max(1.0, abs(s(z))) ** 4
    assert abs(s.residual(z)) <= 1e-10 * scale


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 3), st.integers(3, 40), st.floats(-4, 4), st.floats(-4, 4))
def test_d6_residual(v0, n, alpha, beta):
    s = d6_series(v0, ScaledParams.d6(n, alpha, beta), 50)
    z = 0.5 * s.radiusBound
    assert abs(s.residual(z)) <= 1e-10 * max(1.0, abs(s(z))) ** 4


@pytest.mark.parametrize("U0", [0.5, 1.0, 2.0, 5.0])
def test_majorant_dominates(U0):
    s = d8_series(U0, 80)
    y = majorant_coeffs(2 * U0 + 1, 80)
    assert all(abs(a) <= b for a, b in zip(s.coeffs, y))


@pytest.mark.parametrize("U0", [0.5, 1.0, 2.0, 5.0])
def test_root_test_tracks_fold_point(U0):
    ratio = empirical_majorant_radius(U0) / majorant_branch_point(U0)
    assert 0.8 < ratio < 1.25


def test_majorant_radius_monotone():
    rs = [majorant_radius(u) for u in (0.5, 1, 2, 5)]
    assert all(b < a for a, b in zip(rs, rs[1:]))
    with pytest.raises(ValueError):
        majorant_radius(0)


def test_u0_of_m():
    assert u0_of_m(0) == pytest.approx(1.0)
    assert u0_of_m(0.25) == pytest.approx(math.tan(3 * math.pi / 8))


@pytest.mark.parametrize("m", [F(1, 4), F(1, 3)])
def test_gaps_at_origin_are_origin_values(m):
    U0 = u0_of_m(float(m))
    ge, go = confluence_gap(5, m, 0)
    assert ge == pytest.approx(abs(float(un_zero_backlund(10, m)) - U0), rel=1e-12)
    assert go == pytest.approx(abs(float(un_zero_backlund(11, m)) + 1 / U0), rel=1e-12)


def test_gaps_shrink():
    m = F(1, 4)
    U = d8_series(u0_of_m(0.25), 60)
    g = [confluence_gap(j, m, 0.1, U=U) for j in (4, 8, 16)]
    for k in (0, 1):
        assert g[2][k] < g[1][k] < g[0][k]
        assert g[2][k] < g[0][k] / 2.5
