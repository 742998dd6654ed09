import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p3confluence.specfun import (
    GLAISHER,
    ZETA_PRIME_M1,
    GammaPole,
    barnes_g,
    bessel_j,
    double_factorial_product,
    gamma_complex,
    log_barnes_g,
    log_double_factorial_product,
    log_double_factorial_product_asymptotic,
    loggamma,
)

# reference values from mpmath at 40 digits (scripts/make_oracles.py)
GAMMA = {
    0.3 + 0.2j: 1.9803581728234425 - 1.4145760083733032j,
    -2.5 + 0.1j: -0.8965077011997588 - 0.09931835050056856j,
    7.25 + 0j: 1155.3810139199898 + 0j,
    0.5 - 3j: 0.021445670552430646 - 0.006865364837261678j,
}
LOGGAMMA = {40 + 5j: 106.31616092462582 + 18.39492362670134j, 150.5 + 0j: 602.5139548705854 + 0j}
BARNES = {
    1.75 + 0j: 1.0400326978694872 + 0j,
    0.25 + 0.5j: 0.2977888392330043 + 0.7901536921861759j,
    3.3 - 1.1j: 0.5957384111467076 - 0.29294951556037246j,
    -1.5 + 0j: -0.07200698193480054 + 0j,
}
LOG_BARNES = {30.5 + 0j: 846.6065416156346 + 0j, 20 + 3j: 264.50996182925957 + 0.24319938894036747j}
BESSEL = {
    (0, 0.7): 0.8812008886074053,
    (0, 5 + 1j): -0.2353556147597953 + 0.3863025218540112j,
    (0, 31.5): 0.10823892671147262,
    (0, -12.25): 0.1009306105105151,
    (1, 0.7): 0.32899574154005895,
    (1, 5 + 1j): -0.5090090086716546 - 0.11897595139345368j,
    (1, 31.5): -0.09044569145442247,
    (1, -12.25): 0.200357198755855,
}


@pytest.mark.parametrize("z,want", GAMMA.items())
def test_gamma_reference(z, want):
    assert abs(gamma_complex(z) - want) <= 1e-13 * abs(want)


@pytest.mark.parametrize("z,want", LOGGAMMA.items())
def test_loggamma_reference(z, want):
    assert abs(loggamma(z) - want) <= 1e-12 * abs(want)


@pytest.mark.parametrize("z,want", BARNES.items())
def test_barnes_reference(z, want):
    assert abs(barnes_g(z) - want) <= 1e-12 * abs(want)


@pytest.mark.parametrize("z,want", LOG_BARNES.items())
def test_log_barnes_reference_mod_2pi_i(z, want):
    d = log_barnes_g(z) - want
    k = round(d.imag / (2 * math.pi))
    assert abs(d - 2j * math.pi * k) <= 1e-12 * abs(want)


@pytest.mark.parametrize("key,want", BESSEL.items())
def test_bessel_reference(key, want):
    nu, x = key
    assert abs(bessel_j(nu, x) - want) <= 1e-12


def test_constants():
    assert GLAISHER == pytest.approx(math.exp(1 / 12 - ZETA_PRIME_M1), rel=1e-15)
    assert ZETA_PRIME_M1 == pytest.approx(-0.16542114370045094, rel=1e-15)


@pytest.mark.parametrize("n", [0, -1, -7])
def test_gamma_poles(n):
    with pytest.raises(GammaPole):
        gamma_complex(n)
    with pytest.raises(GammaPole):
        loggamma(n)


def test_barnes_zeros():
    for n in (0, -1, -4):
        assert barnes_g(n) == 0
        with pytest.raises(GammaPole):
            log_barnes_g(n)


def test_barnes_integers():
    # G(n+2) = prod_{k<=n} k!
    for n in range(8):
        assert barnes_g(n + 2).real == pytest.approx(math.prod(math.factorial(k) for k in range(n + 1)), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=12, allow_nan=False, allow_infinity=False))
def test_gamma_functional_equation(z):
    if abs(z.imag) < 1e-3 and z.real < 0.5:
        return
    assert gamma_complex(z + 1) == pytest.approx(z * gamma_complex(z), rel=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=8, allow_nan=False, allow_infinity=False))
def test_barnes_functional_equation(z):
    if abs(z.imag) < 1e-3 and z.real < 0.5:
        return
    lhs = log_barnes_g(z + 1) - log_barnes_g(z) - loggamma(z)
    k = round(lhs.imag / (2 * math.pi))
    assert abs(lhs - 2j * math.pi * k) <= 1e-10 * max(1.0, abs(log_barnes_g(z + 1)))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 40), st.sampled_from([0, 1]))
def test_bessel_wronskian_type_identity(x, nu):
    # J_{nu}' expressed two ways: J0' = -J1 and (x J1)' = x J0, via central differences
    h = 1e-5 * max(1.0, x)
    if nu == 0:
        d = (bessel_j(0, x + h) - bessel_j(0, x - h)) / (2 * h)
        assert abs(d + bessel_j(1, x)) <= 1e-6
    else:
        d = ((x + h) * bessel_j(1, x + h) - (x - h) * bessel_j(1, x - h)) / (2 * h)
        assert abs(d - x * bessel_j(0, x)) <= 1e-6 * max(1.0, x)


def test_bessel_rejects_other_orders():
    with pytest.raises(ValueError):
        bessel_j(2, 1.0)


def test_double_factorial_product():
    assert [double_factorial_product(n) for n in range(5)] == [1, 1, 3, 45, 4725]
    for n in (1, 5, 30):
        assert log_double_factorial_product(n) == pytest.approx(math.log(double_factorial_product(n)), rel=1e-13)


def test_double_factorial_asymptotic_converges():
    errs = [abs(log_double_factorial_product(n) - log_double_factorial_product_asymptotic(n)) for n in (10, 20, 40, 80)]
    assert errs[-1] < 1e-3
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_loggamma_reflection_branch_continuity():
    z = -3.5 + 1e-9j
    assert cmath.exp(loggamma(z)) == pytest.approx(gamma_complex(z), rel=1e-10)
