"""Gromak's Backlund map for PIII(D6), rational solutions u_n(x;m) and the
Hamiltonian quantities p_n, H_n, h_n.

PIII(D6):  u'' = u'^2/u - u'/x + (alpha u^2 + beta)/x + 4u^3 - 4/u.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import numpy as np

from .exact import (
    ONE,
    PoleHit,
    RationalFunction,
    RationalPoly,
    poly_derivative,
    poly_normalized_float,
    ratfun_eval,
)


class DegenerateDenominator(ArithmeticError):
    """The Backlund formula has an identically vanishing denominator."""


class UnclassifiedSingularity(ArithmeticError):
    """A pole residue or zero slope is not close to the expected values."""


@dataclass(frozen=True)
class PIIIParams:
    alpha: Fraction | complex
    beta: Fraction | complex

    @staticmethod
    def rational_family(n: int, m) -> "PIIIParams":
        m = Fraction(m)
        return PIIIParams(4 * (n + m), 4 * (n - m))

    def shifted(self, k: int) -> "PIIIParams":
        return PIIIParams(self.alpha + 4 * k, self.beta + 4 * k)


@dataclass(frozen=True)
class PoleZeroReport:
    poles: list[tuple[complex, Fraction]]
    zeros: list[tuple[complex, int]]
    max_error: float


def _parts(u: RationalFunction):
    """Return P, Q, and x*Q^2*u' numerator pieces for u = P/Q."""
    P, Q = u.num, u.den
    W = poly_derivative(P) * Q - P * poly_derivative(Q)  # Q^2 u'
    return P, Q, W


def gromak_forward(u: RationalFunction, p: PIIIParams) -> RationalFunction:
    """u -> u_hat solving PIII with (alpha+4, beta+4)."""
    P, Q, W = _parts(u)
    x = RationalPoly.x()
    common = 2 * x * W + 4 * x * (P * P + Q * Q)
    top = common - (p.beta + 2) * (P * Q)
    bot = common + (p.alpha + 2) * (P * Q)
    den = P * bot
    if den.is_zero():
        raise DegenerateDenominator("u * (2xu' + 4xu^2 + 4x + (alpha+2)u) vanishes identically")
    return RationalFunction(top * Q, den)


def gromak_inverse(uhat: RationalFunction, p: PIIIParams) -> RationalFunction:
    """Inverse map; p holds the parameters of uhat, so the result solves (alpha-4, beta-4)."""
    a, b = p.alpha - 4, p.beta - 4
    P, Q, W = _parts(uhat)
    x = RationalPoly.x()
    common = 2 * x * W - 4 * x * (P * P + Q * Q)
    top = common + (b + 2) * (P * Q)
    bot = common - (a + 2) * (P * Q)
    den = P * bot
    if den.is_zero():
        raise DegenerateDenominator("inverse Backlund denominator vanishes identically")
    return RationalFunction(top * Q, den)


@lru_cache(maxsize=256)
def rational_un(n: int, m) -> RationalFunction:
    """u_n(x;m): n Backlund steps from u_0 = 1 with alpha = 4m, beta = -4m."""
    if n < 0:
        raise ValueError("n >= 0 required")
    m = Fraction(m)
    if n == 0:
        return RationalFunction(ONE)
    return gromak_forward(rational_un(n - 1, m), PIIIParams.rational_family(n - 1, m))


def piii_rhs(x, u, up, alpha, beta):
    """u'' prescribed by PIII(D6) in terms of (x, u, u')."""
    return up * up / u - up / x + (alpha * u * u + beta) / x + 4 * u * u * u - 4 / u


def un_value(n: int, m, x):
    """(u_n(x), u_n'(x)) by applying the Backlund map pointwise.

    The map needs only u and u' at x; u'' is eliminated through the equation.
    Exact for Fraction or GaussRational x != 0.
    """
    m = Fraction(m)
    u, up = Fraction(1), Fraction(0)
    if isinstance(x, complex):
        u, up = 1 + 0j, 0j
    elif isinstance(x, (Fraction, int)):
        # same exact arithmetic, faster big-rational backend
        x = gmpy2.mpq(Fraction(x).numerator, Fraction(x).denominator)
        m = gmpy2.mpq(m.numerator, m.denominator)
        u, up = gmpy2.mpq(1), gmpy2.mpq(0)
    for k in range(n):
        a, b = 4 * (k + m), 4 * (k - m)
        upp = piii_rhs(x, u, up, a, b)
        c = 2 * x * up + 4 * x * u * u + 4 * x
        cp = 2 * up + 2 * x * upp + 4 * u * u + 8 * x * u * up + 4
        N = c - (b + 2) * u
        Np = cp - (b + 2) * up
        M = c + (a + 2) * u
        Mp = cp + (a + 2) * up
        D = u * M
        if D == 0:
            raise PoleHit(f"Backlund step {k} hits a pole at {x}")
        Dp = up * M + u * Mp
        u, up = N / D, (Np * D - N * Dp) / (D * D)
    if isinstance(u, type(gmpy2.mpq())):
        return (Fraction(int(u.numerator), int(u.denominator)),
                Fraction(int(up.numerator), int(up.denominator)))
    return u, up


def _float_roots(p: RationalPoly) -> np.ndarray:
    if p.degree < 1:
        return np.array([], dtype=complex)
    _, c = poly_normalized_float(p)
    roots = np.roots(c[::-1]).astype(complex)
    # polish with Newton on the normalized coefficients
    cd = [i * c[i] for i in range(1, len(c))]
    for _ in range(4):
        f = np.polyval(c[::-1], roots)
        fd = np.polyval(cd[::-1], roots)
        roots = roots - np.where(fd != 0, f / np.where(fd != 0, fd, 1), 0)
    return roots


def classify_poles_zeros(u: RationalFunction, tol: float = 1e-6) -> PoleZeroReport:
    """Residues at nonzero poles (expect +-1/2) and slopes at nonzero zeros (expect +-2)."""
    poles, zeros, worst = [], [], 0.0
    num_f = RationalFunction(u.num)
    den_f = RationalFunction(u.den)
    dnum = num_f.derivative()
    dden = den_f.derivative()
    for r in _float_roots(u.den):
        if abs(r) < 1e-12:
            continue
        res = ratfun_eval(num_f, r) / ratfun_eval(dden, r)
        target = Fraction(1, 2) if res.real > 0 else Fraction(-1, 2)
        err = abs(res - float(target))
        if err > tol:
            raise UnclassifiedSingularity(f"residue {res} at {r}")
        worst = max(worst, err)
        poles.append((complex(r), target))
    for r in _float_roots(u.num):
        if abs(r) < 1e-12:
            continue
        slope = ratfun_eval(dnum, r) / ratfun_eval(den_f, r)
        target = 2 if slope.real > 0 else -2
        err = abs(slope - target)
        if err > tol:
            raise UnclassifiedSingularity(f"slope {slope} at zero {r}")
        worst = max(worst, err)
        zeros.append((complex(r), target))
    return PoleZeroReport(poles, zeros, worst)


def momentum_pn(u: RationalFunction, n: int, m) -> RationalFunction:
    """p_n = x u'/(4u^2) + x/2 - x/(2u^2) - (2m-2n+1)/(4u)."""
    m = Fraction(m)
    x = RationalFunction.x()
    u2 = u * u
    return x * u.derivative() / (4 * u2) + x / 2 - x / (2 * u2) - (2 * m - 2 * n + 1) / (4 * u)


def hamiltonian_hn(u: RationalFunction, n: int, m) -> tuple[RationalFunction, RationalFunction]:
    """(H_n, h_n) with x H_n = 2p^2u^2 + p(2x - 2xu^2 + (1+2m-2n)u) - (2m+1)xu
    and h_n = H_n + u p/x - 2x + n^2/x."""
    m = Fraction(m)
    x = RationalFunction.x()
    p = momentum_pn(u, n, m)
    u2 = u * u
    xH = 2 * p * p * u2 + p * (2 * x - 2 * x * u2 + (1 + 2 * m - 2 * n) * u) - (2 * m + 1) * x * u
    H = xH / x
    h = H + u * p / x - 2 * x + RationalFunction.const(n * n) / x
    return H, h


def hamiltonian_large_x(x: complex, n: int, m) -> complex:
    """Expansion of H_n + u_n p_n / x through x^{-3}."""
    m = complex(m)
    return (
        -2 * m - 1
        - (2 * m + 1) * (2 * m - 4 * n + 3) / (8 * x)
        + (1 + 2 * m) * (1 - n) * n / (8 * x * x)
        + (1 + 2 * m) ** 2 * (n - 1) * n / (32 * x**3)
    )


def h_first_identity(n: int, m) -> RationalFunction:
    """h_{n+1} - h_n + 2 u_n p_n / x - (2n+1)/x; identically zero."""
    m = Fraction(m)
    x = RationalFunction.x()
    u = rational_un(n, m)
    p = momentum_pn(u, n, m)
    return (hamiltonian_hn(rational_un(n + 1, m), n + 1, m)[1] - hamiltonian_hn(u, n, m)[1]
            + 2 * u * p / x - RationalFunction.const(2 * n + 1) / x)


def h_second_identity(n: int, m) -> RationalFunction:
    """h_{n-1} - h_n minus its closed form in u_n, p_n; identically zero (n >= 1)."""
    if n < 1:
        raise ValueError("n >= 1 required")
    m = Fraction(m)
    x = RationalFunction.x()
    u = rational_un(n, m)
    p = momentum_pn(u, n, m)
    rhs = -2 * u * p / x - RationalFunction.const(2 * m + 1) / x + RationalFunction.const(1 - 2 * n) / (x - p)
    return hamiltonian_hn(rational_un(n - 1, m), n - 1, m)[1] - hamiltonian_hn(u, n, m)[1] - rhs


def pre_toda_identity(n: int, m) -> RationalFunction:
    """d/dx ln(x (x h_n)') - (h_{n+1} + h_{n-1} - 2 h_n); identically zero (n >= 1)."""
    if n < 1:
        raise ValueError("n >= 1 required")
    m = Fraction(m)
    x = RationalFunction.x()
    h = [hamiltonian_hn(rational_un(k, m), k, m)[1] for k in (n - 1, n, n + 1)]
    g = x * (x * h[1]).derivative()
    return g.derivative() / g - (h[2] + h[0] - 2 * h[1])


def tau_integrand(n: int, m) -> RationalFunction:
    """H_n + u_n p_n / x + 2m + 1 + (2m+1)(2m-4n+3)/(8x); zero for n = 0, 1."""
    m = Fraction(m)
    x = RationalFunction.x()
    u = rational_un(n, m)
    p = momentum_pn(u, n, m)
    H = hamiltonian_hn(u, n, m)[0]
    return (H + u * p / x + RationalFunction.const(2 * m + 1)
            + RationalFunction.const((2 * m + 1) * (2 * m - 4 * n + 3) / 8) / x)


def umemura_logderivative_identity(n: int, m) -> RationalFunction:
    """s_n'/s_n - [2m + 1 + H_{n+1} + u_{n+1} p_{n+1}/x + (4(m-n)^2 - 1)/(8x)];
    identically zero."""
    from .umemura import umemura_poly

    m = Fraction(m)
    x = RationalFunction.x()
    s = RationalFunction(umemura_poly(n, m))
    u = rational_un(n + 1, m)
    p = momentum_pn(u, n + 1, m)
    H = hamiltonian_hn(u, n + 1, m)[0]
    rhs = (RationalFunction.const(2 * m + 1) + H + u * p / x
           + RationalFunction.const((4 * (m - n) ** 2 - 1) / 8) / x)
    return s.derivative() / s - rhs


def piii_residual(u: RationalFunction, p: PIIIParams, x: complex) -> complex:
    """u'' minus the PIII(D6) right-hand side at x (floating point)."""
    d1 = u.derivative()
    d2 = d1.derivative()
    uv, u1, u2 = ratfun_eval(u, x), ratfun_eval(d1, x), ratfun_eval(d2, x)
    return u2 - piii_rhs(complex(x), uv, u1, complex(p.alpha), complex(p.beta))
