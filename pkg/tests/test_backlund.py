"""Backlund iteration, the Hamiltonian structure and its identities."""
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p3confluence.backlund import (
    DegenerateDenominator,
    PIIIParams,
    classify_poles_zeros,
    gromak_forward,
    gromak_inverse,
    h_first_identity,
    h_second_identity,
    hamiltonian_hn,
    hamiltonian_large_x,
    momentum_pn,
    piii_residual,
    pre_toda_identity,
    rational_un,
    tau_integrand,
    umemura_logderivative_identity,
    un_value,
)
from p3confluence.exact import GaussRational, PoleHit, RationalFunction, ratfun_eval

X = RationalFunction.x()
ms = st.fractions(min_value=-2, max_value=2, max_denominator=9).filter(lambda m: (2 * m).denominator != 1)


def exact_residual(u: RationalFunction, alpha, beta) -> RationalFunction:
    d1 = u.derivative()
    d2 = d1.derivative()
    rhs = d1 * d1 / u - d1 / X + (alpha * u * u + beta) / X + 4 * u * u * u - 4 / u
    return d2 - rhs


def test_first_iterate_closed_form():
    # u_1 = (4x + 2m - 1)/(4x + 2m + 1)
    m = F(1, 4)
    assert rational_un(1, m) == (4 * X + 2 * m - 1) / (4 * X + 2 * m + 1)


def test_seed_is_constant_one():
    assert rational_un(0, F(1, 3)) == RationalFunction.const(1)


@settings(max_examples=8, deadline=None)
@given(ms, st.integers(0, 5))
def test_iterates_solve_the_equation_exactly(m, n):
    p = PIIIParams.rational_family(n, m)
    assert exact_residual(rational_un(n, m), p.alpha, p.beta).is_zero()


@settings(max_examples=8, deadline=None)
@given(ms, st.integers(1, 5))
def test_inverse_undoes_forward(m, n):
    p = PIIIParams.rational_family(n, m)
    assert gromak_inverse(rational_un(n, m), p) == rational_un(n - 1, m)
    back = gromak_forward(gromak_inverse(rational_un(n, m), p), p.shifted(-1))
    assert back == rational_un(n, m)


def test_float_residual_small():
    m = F(1, 3)
    for n in range(5):
        p = PIIIParams.rational_family(n, m)
        assert abs(piii_residual(rational_un(n, m), p, 0.37 + 0.21j)) < 1e-9


def test_degenerate_denominator():
    # the map divides by u, so u = 0 is degenerate
    with pytest.raises(DegenerateDenominator):
        gromak_forward(RationalFunction.const(0), PIIIParams(0, 0))


@settings(max_examples=10, deadline=None)
@given(ms, st.integers(0, 6), st.fractions(min_value=F(1, 10), max_value=3, max_denominator=20))
def test_pointwise_iteration_matches_rational_function(m, n, x):
    u = rational_un(n, m)
    try:
        uv, up = un_value(n, m, x)
        want = u(x)
    except (PoleHit, ZeroDivisionError):
        return
    assert uv == want
    assert up == u.derivative()(x)


def test_pointwise_iteration_gauss_point():
    m, z = F(1, 4), GaussRational(F(1, 5), F(1, 7))
    u, _ = un_value(4, m, z)
    assert u == rational_un(4, m)(z)


def test_poles_and_zeros_have_unit_structure():
    rep = classify_poles_zeros(rational_un(5, F(1, 4)))
    assert rep.poles and rep.zeros
    assert all(abs(r) in (F(1, 2),) for _, r in rep.poles)
    assert all(abs(s) == 2 for _, s in rep.zeros)
    assert rep.max_error < 1e-8


@pytest.mark.parametrize("n", range(7))
def test_first_h_identity(n):
    assert h_first_identity(n, F(1, 4)).is_zero()


@pytest.mark.parametrize("n", range(1, 7))
def test_second_h_identity(n):
    assert h_second_identity(n, F(1, 4)).is_zero()


@pytest.mark.parametrize("n", range(1, 5))
def test_pre_toda_identity(n):
    assert pre_toda_identity(n, F(2, 7)).is_zero()


@pytest.mark.parametrize("n", range(5))
def test_umemura_log_derivative(n):
    assert umemura_logderivative_identity(n, F(1, 4)).is_zero()


def test_tau_integrand_vanishes_only_for_first_two():
    m = F(1, 4)
    assert tau_integrand(0, m).is_zero()
    assert tau_integrand(1, m).is_zero()
    assert not tau_integrand(2, m).is_zero()


def test_identity_argument_checks():
    with pytest.raises(ValueError):
        h_second_identity(0, F(1, 4))
    with pytest.raises(ValueError):
        pre_toda_identity(0, F(1, 4))
    with pytest.raises(ValueError):
        rational_un(-1, F(1, 4))


@pytest.mark.parametrize("n", range(7))
def test_large_x_expansion(n):
    m = F(1, 4)
    u = rational_un(n, m)
    H, _ = hamiltonian_hn(u, n, m)
    v = ratfun_eval(H + u * momentum_pn(u, n, m) / X, 1000.0)
    assert abs(v - hamiltonian_large_x(1000.0, n, m)) <= 1e-10
    # the truncation error scales like x^{-4}
    v2 = ratfun_eval(H + u * momentum_pn(u, n, m) / X, 100.0)
    assert abs(v2 - hamiltonian_large_x(100.0, n, m)) <= 1e-6
