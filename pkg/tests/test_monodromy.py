"""Stokes data, connection matrices and the D6 / D8 cubic surfaces."""
import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from p3confluence.monodromy import (
    MonodromyData,
    NonGeneric,
    all_singular_points,
    connection_matrices,
    cplus_alternative,
    cplus_two_way_residual,
    cyclic_residuals,
    d6_cubic,
    d6_cubic_alpha_beta,
    d8_cubic,
    det2,
    eigen_residuals,
    eigenvector_matrices,
    limiting_d8_data,
    random_generic,
    random_generic_counted,
    reciprocal_e1,
    schlesinger_update,
    singular_points,
    stokes_multipliers,
    trace_identity_residuals,
    x_coords,
    y_coords,
    y_from_connection,
)

strip = st.floats(-0.49, 0.5)
small = st.floats(-0.5, 0.5)
theta = st.floats(-2, 2)


@st.composite
def generic_data(draw):
    d = MonodromyData(
        complex(draw(theta), draw(theta)),
        complex(draw(theta), draw(theta)),
        complex(draw(strip), draw(small)),
        complex(draw(strip), draw(small)),
    )
    assume(all(v > 1e-3 for v in d.genericity_defects().values()))
    return d


def test_strip_validation():
    with pytest.raises(ValueError):
        MonodromyData(0, 0, 0.7, 0.1)
    with pytest.raises(ValueError):
        MonodromyData(0, 0, 0.1, -0.5)


def test_nongeneric_rejected():
    d = MonodromyData(0.3, 0.2, 0, 0.1)  # e1^4 = 1
    assert not d.is_generic()
    with pytest.raises(NonGeneric):
        stokes_multipliers(d)
    with pytest.raises(NonGeneric):
        MonodromyData.from_e2(0.3, 0.2, 0.1, 0)


def test_alpha_beta_roundtrip():
    d = MonodromyData.from_alpha_beta(1.2, -0.4 + 1j, 0.1, 0.2)
    assert d.alpha == pytest.approx(1.2)
    assert d.beta == pytest.approx(-0.4 + 1j)


@settings(max_examples=60, deadline=None)
@given(generic_data())
def test_trace_identities(d):
    a, b = trace_identity_residuals(d)
    scale = max(1.0, abs(d.e0) ** 4, abs(d.eInf) ** 4, abs(d.e1) ** 4, abs(d.e1) ** -4)
    assert max(a, b) <= 1e-12 * scale


@settings(max_examples=60, deadline=None)
@given(generic_data())
def test_eigen_and_cyclic(d):
    assert max(eigen_residuals(d)) <= 1e-12
    assert max(cyclic_residuals(d)) <= 1e-12
    assert cplus_two_way_residual(d) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(generic_data())
def test_unimodular(d):
    Einf, E0 = eigenvector_matrices(d)
    Cm, Cp = connection_matrices(d)
    for M in (Einf, E0, Cm, Cp):
        s = float(np.max(np.abs(M))) ** 2
        assert abs(det2(M) - 1) <= 1e-11 * max(1.0, s)
    Ca = cplus_alternative(d)
    assert float(np.max(np.abs(Ca - Cp))) <= 1e-9 * max(1.0, float(np.max(np.abs(Cp))))


@settings(max_examples=60, deadline=None)
@given(generic_data())
def test_points_lie_on_cubics(d):
    assert x_coords(d).residual <= 1e-10
    assert y_coords(d, 1).residual <= 1e-10
    assert y_coords(d, -1).residual <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.floats(-3, 3), st.floats(-3, 3))
def test_cubic_written_two_ways(x1, x2, x3, alpha, beta):
    d = MonodromyData.from_alpha_beta(alpha, beta, 0.1, 0.1)
    lhs = d6_cubic((x1, x2, x3), d.e0, d.eInf)
    rhs = d6_cubic_alpha_beta((x1, x2, x3), alpha, beta)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(x1 * x2 * x3), abs(x1) ** 2, abs(x2) ** 2)


@settings(max_examples=40, deadline=None)
@given(generic_data())
def test_reciprocal_e1_leaves_x_fixed(d):
    for root in (1, -1):
        try:
            e = reciprocal_e1(d, root)
        except (NonGeneric, ValueError):
            continue
        if not e.is_generic(1e-6):
            continue
        a, b = x_coords(d).coords, x_coords(e).coords
        scale = max(1.0, *(abs(v) for v in a))
        if max(abs(p - q) for p, q in zip(a, b)) <= 1e-9 * scale:
            return
    pytest.fail("no root choice maps the data to the same D6 point")


@pytest.mark.parametrize("m", [0.1, 0.3, -0.2, 0.3 + 0.1j])
def test_rational_family_d8_point(m):
    y = y_coords(MonodromyData.rational(m)).coords
    q = cmath.sqrt(1 + cmath.exp(2j * math.pi * m))
    want = (1j * cmath.exp(1j * math.pi * m) / q, 1j / q)
    gap = min(max(abs(a - s * b) for a, b in zip(y[:2], want)) for s in (1, -1))
    assert gap <= 1e-12
    assert abs(y[2]) <= 1e-12
    assert abs(d8_cubic(y)) <= 1e-12


def test_rational_family_limiting_multiplier_vanishes():
    t, _ = limiting_d8_data(MonodromyData.rational(0.3), "even")
    assert abs(t) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(generic_data(), st.sampled_from(["even", "odd"]))
def test_limiting_data_matches_y_coordinates(d, parity):
    dn = schlesinger_update(d, 0 if parity == "even" else 1)
    assume(dn.is_generic(1e-3))
    t, C = limiting_d8_data(d, parity)
    y = y_from_connection(t, C)
    assert y.residual <= 1e-10
    best = min(max(abs(a - b) for a, b in zip(y.coords, y_coords(dn, r).coords)) for r in (1, -1))
    assert best <= 1e-8 * max(1.0, *(abs(v) for v in y.coords))


def test_limiting_parity_checked():
    with pytest.raises(ValueError):
        limiting_d8_data(MonodromyData.rational(0.3), "both")


def test_schlesinger_update():
    d = MonodromyData(0.2, 0.7, 0.3 + 0.1j, 0.1)
    e = schlesinger_update(d, 2)
    assert (e.theta0, e.thetaInf, e.mu) == (2.2, -1.3, d.mu)
    o = schlesinger_update(d, 3)
    assert o.mu == pytest.approx(d.mu - 0.5)
    neg = schlesinger_update(MonodromyData(0.2, 0.7, -0.3, 0.1), 1)
    assert neg.mu == pytest.approx(0.2)
    imag = schlesinger_update(MonodromyData(0.2, 0.7, 0.2j, 0.1), 1)
    assert imag.mu == pytest.approx(0.5 + 0.2j)


def test_singular_points():
    # e0^2 = eInf^2
    d = MonodromyData(0.3, 2.3, 0.1, 0.1)
    p = singular_points(d)
    assert p is not None and p.coords[:2] == (-1, 0)
    assert p.residual <= 1e-12
    # e0^-2 = eInf^2
    d = MonodromyData(0.3, -0.3, 0.1, 0.1)
    p = singular_points(d)
    assert p.coords[0] == 0 and p.coords[1] == pytest.approx(-1 / d.e0**2)
    # smooth case
    assert singular_points(MonodromyData(0.3, 0.6, 0.1, 0.1)) is None
    # e0^4 = 1 with e0^2 = eInf^2: both candidates are singular
    both = all_singular_points(MonodromyData(1, 1, 0.1, 0.1))
    assert len(both) == 2


def test_random_draws_are_seeded_and_generic():
    a = [random_generic(np.random.default_rng(5)) for _ in range(2)]
    assert a[0] == a[1]
    rng = np.random.default_rng(11)
    for _ in range(50):
        d, rejected = random_generic_counted(rng)
        assert rejected >= 0 and d.is_generic(1e-3)


def test_rejection_counted():
    rng = np.random.default_rng(0)
    # a wide margin forces rejections
    total = sum(random_generic_counted(rng, margin=0.9)[1] for _ in range(20))
    assert total > 0
