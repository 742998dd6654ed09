"""Umemura polynomials, their origin values and the determinant formula."""
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p3confluence.backlund import rational_un
from p3confluence.exact import GaussRational, RationalPoly
from p3confluence.umemura import (
    HalfIntegerM,
    laguerre_moment,
    phi_closed,
    taylor_eval,
    umemura_extend,
    umemura_poly,
    umemura_sequence,
    umemura_taylor,
    un_from_umemura,
    un_zero_backlund,
    un_zero_gamma,
    un_zero_product,
    wronskian_2jk_check,
    wronskian_det,
)

# coefficient lists (constant term first) from an independent sympy run of the recurrence
S_QUARTER = {
    1: ["3/4", "2"],
    2: ["-21/64", "27/8", "9", "8"],
    3: ["3465/4096", "945/256", "-945/64", "75/2", "135", "144", "64"],
    4: ["3274425/1048576", "-4106025/65536", "-3586275/16384", "-23625/256", "99225/128",
        "-6615/8", "945/2", "5040", "6480", "3840", "1024"],
}
S_ZERO = {1: ["1/2", "2"], 2: ["-3/8", "3/2", "6", "8"], 3: ["45/64", "45/8", "-45/4", "0", "60", "96", "64"]}

small_m = st.fractions(min_value=-3, max_value=3, max_denominator=12)


def poly(cs):
    return RationalPoly.from_coeffs([F(c) for c in cs])


@pytest.mark.parametrize("n", sorted(S_QUARTER))
def test_frozen_quarter(n):
    assert umemura_poly(n, F(1, 4)) == poly(S_QUARTER[n])


@pytest.mark.parametrize("n", sorted(S_ZERO))
def test_frozen_zero(n):
    assert umemura_poly(n, 0) == poly(S_ZERO[n])


def test_initial_terms():
    seq = umemura_sequence(F(1, 3), 0)
    assert seq.n_max == 0
    assert seq.s(-1) == seq.s(0) == RationalPoly.const(1)
    with pytest.raises(IndexError):
        seq.s(1)
    # s_1 = (4x + 2m + 1)/2
    assert umemura_poly(1, F(1, 3)) == RationalPoly.from_coeffs([F(5, 6), 2])


@settings(max_examples=15, deadline=None)
@given(small_m, st.integers(1, 8))
def test_degree_and_leading_coefficient(m, n):
    p = umemura_poly(n, m)
    assert p.degree == n * (n + 1) // 2
    assert p.lc() == 2 ** (n * (n + 1) // 2)


@settings(max_examples=15, deadline=None)
@given(small_m, st.integers(0, 10))
def test_origin_closed_form(m, n):
    assert umemura_poly(n, m)(F(0)) == phi_closed(n, m + F(1, 2))


def test_extend_is_consistent():
    a = umemura_sequence(F(2, 5), 3)
    b = umemura_extend(a, 6)
    assert b.s(6) == umemura_poly(6, F(2, 5))
    with pytest.raises(ValueError):
        umemura_extend(b, 2)


@pytest.mark.parametrize("m", [F(0), F(1, 4), F(1, 3), F(2, 5)])
def test_origin_values_three_ways(m):
    for n in range(17):
        p = un_zero_product(n, m)
        assert p == un_zero_backlund(n, m)
        g = un_zero_gamma(n, float(m))
        assert abs(g - float(p)) <= 1e-12 * abs(float(p))


def test_origin_values_half_integer():
    with pytest.raises(HalfIntegerM):
        un_zero_product(2, F(1, 2))
    with pytest.raises(HalfIntegerM):
        un_zero_backlund(2, F(1, 2))
    with pytest.raises(HalfIntegerM):
        un_zero_product(1, F(-1, 2))


@pytest.mark.parametrize("m", [F(1, 4), F(-2, 3)])
def test_ratio_equals_backlund_iterate(m):
    for n in range(7):
        assert un_from_umemura(n, m) == rational_un(n, m)


@settings(max_examples=10, deadline=None)
@given(small_m, st.integers(0, 6), st.integers(2, 20))
def test_taylor_route_matches_polynomial(m, n, order):
    c = umemura_taylor(n, m, order)
    full = umemura_poly(n, m).coeffs
    want = list(full[: order + 1]) + [F(0)] * max(0, order + 1 - len(full))
    assert c == want


def test_taylor_eval_gauss_point():
    c = umemura_taylor(3, F(1, 4), 10)
    z = GaussRational(F(1, 7), F(-1, 3))
    assert taylor_eval(c, z) == umemura_poly(3, F(1, 4))(z)


def test_laguerre_moments_low_order():
    m, x = F(1, 4), F(1, 3)
    a = m + F(1, 2)
    assert laguerre_moment(0, x, m) == 1
    assert laguerre_moment(1, x, m) == a / 2 + x
    assert laguerre_moment(-1, x, m) == 0
    assert wronskian_det(0, x, m) == 1


@pytest.mark.parametrize("m", [F(1, 4), F(0), F(-2, 7)])
@pytest.mark.parametrize("x", [F(1, 3), F(-2, 5)])
def test_wronskian_identity_exact(m, x):
    for n in range(7):
        assert wronskian_2jk_check(n, x, m) == 0


def test_wronskian_identity_opposite_sign_fails():
    assert wronskian_2jk_check(3, F(1, 3), F(1, 4), sign=-1) != 0


def test_wronskian_float_route():
    # a non-rational point goes through floats
    m, x = F(1, 4), 0.3 + 0.2j
    for n in (1, 3, 5):
        r = wronskian_2jk_check(n, x, m)
        assert abs(r) <= 1e-10 * abs(umemura_poly(n, m)(x))
