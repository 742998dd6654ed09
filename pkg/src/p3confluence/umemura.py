"""Umemura polynomials s_n(x;m), their values at x = 0 and the determinant formula.

The recurrence

    2 s_{n-1} s_{n+1} = (4x+2m+1) s_n^2 - s_n' s_n - x (s_n'' s_n - s_n'^2),
    s_{-1} = s_0 = 1,

is run in exact arithmetic; every division is checked to be exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod

import gmpy2

from .exact import (
    GaussRational,
    NonDivisible,
    RationalFunction,
    RationalPoly,
    poly_derivative,
    poly_div_exact,
)
from .specfun import gamma_complex


class HalfIntegerM(ArithmeticError):
    """A factor in the closed forms for u_n(0;m) vanishes (m in Z + 1/2)."""


class NonExactPower(ArithmeticError):
    """The power of two in the determinant identity is not an integer."""


@dataclass(frozen=True)
class UmemuraSequence:
    """s_{-1}, s_0, ..., s_N for one rational m (polys[k] holds s_{k-1})."""

    m: Fraction
    polys: tuple[RationalPoly, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "m", Fraction(self.m))
        if not self.polys:
            one = RationalPoly.const(1)
            object.__setattr__(self, "polys", (one, one))

    @property
    def n_max(self) -> int:
        return len(self.polys) - 2

    def s(self, n: int) -> RationalPoly:
        if n < -1 or n > self.n_max:
            raise IndexError(f"s_{n} not computed (n_max = {self.n_max})")
        return self.polys[n + 1]


def _step(s_prev: RationalPoly, s_cur: RationalPoly, m: Fraction) -> RationalPoly:
    x = RationalPoly.x()
    d1 = poly_derivative(s_cur)
    d2 = poly_derivative(d1)
    lin = RationalPoly.from_coeffs([2 * m + 1, 4])
    num = lin * s_cur * s_cur - d1 * s_cur - x * (d2 * s_cur - d1 * d1)
    return poly_div_exact(num, s_prev * 2)


def umemura_extend(seq: UmemuraSequence, upTo: int) -> UmemuraSequence:
    """Extend the sequence to s_upTo; NonDivisible would falsify polynomiality."""
    if upTo < seq.n_max:
        raise ValueError("upTo must not be below the current maximal index")
    polys = list(seq.polys)
    while len(polys) - 2 < upTo:
        polys.append(_step(polys[-2], polys[-1], seq.m))
    return UmemuraSequence(seq.m, tuple(polys))


@lru_cache(maxsize=512)
def umemura_sequence(m: Fraction, n: int) -> UmemuraSequence:
    """Cached s_{-1..n}(x;m); reuses shorter cached runs."""
    m = Fraction(m)
    if n <= 0:
        return UmemuraSequence(m)
    return umemura_extend(umemura_sequence(m, n - 1), n)


def umemura_poly(n: int, m) -> RationalPoly:
    return umemura_sequence(Fraction(m), n).s(n)


# -- truncated Taylor route (large n near x = 0) ---------------------------------

def _series_mul(a: list, b: list, L: int) -> list:
    out = [0] * min(L, len(a) + len(b) - 1)
    for i, ai in enumerate(a[:L]):
        if ai:
            for j in range(min(len(b), L - i)):
                out[i + j] += ai * b[j]
    return out


def _series_div(a: list, b: list, L: int) -> list:
    if b[0] == 0:
        raise ZeroDivisionError("series division by a series vanishing at 0")
    inv0 = 1 / gmpy2.mpq(b[0])
    c: list = []
    for k in range(L):
        acc = a[k] if k < len(a) else 0
        for i in range(max(0, k - len(b) + 1), k):
            acc -= c[i] * b[k - i]
        c.append(acc * inv0)
    return c


def umemura_taylor(n: int, m, order: int) -> list[Fraction]:
    """Exact Maclaurin coefficients of s_n(x;m) through x^order.

    Each recurrence step consumes one order (s_n' appears), so the run starts
    with order + n + 1 coefficients and trims as it goes.
    """
    m = Fraction(m)
    if n <= 0:
        return [Fraction(1)] + [Fraction(0)] * order
    L = order + n + 2
    m = gmpy2.mpq(m.numerator, m.denominator)
    prev = [gmpy2.mpq(1)] + [gmpy2.mpq(0)] * (L - 1)
    cur = list(prev)
    for k in range(n):
        L -= 1
        d1 = [i * cur[i] for i in range(1, len(cur))]
        d2 = [i * d1[i] for i in range(1, len(d1))]
        sq = _series_mul(cur, cur, L)
        t1 = [(2 * m + 1) * c for c in sq]
        t1 += [0] * (L - len(t1))
        for i in range(1, L):
            t1[i] += 4 * sq[i - 1]
        a = _series_mul(d1, cur, L)
        b = _series_mul(d2, cur, L)
        c2 = _series_mul(d1, d1, L)
        num = []
        for i in range(L):
            v = t1[i] - (a[i] if i < len(a) else 0)
            if i >= 1:
                v -= (b[i - 1] if i - 1 < len(b) else 0) - (c2[i - 1] if i - 1 < len(c2) else 0)
            num.append(v)
        den = [2 * v for v in prev[:L]]
        prev, cur = cur[:L], _series_div(num, den, L)
    return [Fraction(int(c.numerator), int(c.denominator)) for c in cur[: order + 1]]


def taylor_eval(coeffs: list[Fraction], x) -> complex:
    """Sum a Taylor polynomial at x (exact for Fraction/GaussRational x)."""
    v = 0
    for c in reversed(coeffs):
        v = v * x + c
    return v


def un_from_umemura(n: int, m) -> RationalFunction:
    """u_n(x;m) = s_n(m-1) s_{n-1}(m) / (s_n(m) s_{n-1}(m-1)) as a reduced rational function."""
    if n < 0:
        raise ValueError("n >= 0 required")
    m = Fraction(m)
    num = umemura_poly(n, m - 1) * umemura_poly(n - 1, m)
    den = umemura_poly(n, m) * umemura_poly(n - 1, m - 1)
    return RationalFunction(num, den)


# -- values at the origin ---------------------------------------------------------

def phi_closed(n: int, y) -> Fraction:
    """phi_n(y) = s_n(0; y - 1/2) from the finite products."""
    y = Fraction(y)
    if n < -1:
        raise ValueError("n >= -1 required")
    if n <= 0:
        return Fraction(1)
    k, odd = divmod(n, 2)
    if odd:
        # phi_{2k+1} = phi_{2k} * y * prod_{j<=k} (y^2 - (2j)^2)
        return phi_closed(2 * k, y) * y * prod((y * y - (2 * j) ** 2 for j in range(1, k + 1)), start=Fraction(1))
    out = y**k * (y * y - 1) ** k
    for j in range(1, k):
        out *= (y * y - (2 * j) ** 2) ** (k - j) * (y * y - (2 * j + 1) ** 2) ** (k - j)
    return out


def un_zero_product(n: int, m) -> Fraction:
    """u_n(0;m) from the finite products over odd (even n) or even (odd n) integers."""
    if n < 0:
        raise ValueError("n >= 0 required")
    m = Fraction(m)
    a, b = (m - Fraction(1, 2)) ** 2, (m + Fraction(1, 2)) ** 2
    k, odd = divmod(n, 2)
    out = Fraction(1)
    if odd:
        if m + Fraction(1, 2) == 0:
            raise HalfIntegerM(f"m = {m}")
        out = (m - Fraction(1, 2)) / (m + Fraction(1, 2))
    for j in range(1, k + 1):
        q = 2 * j if odd else 2 * j - 1
        den = b - q * q
        if den == 0:
            raise HalfIntegerM(f"m = {m}")
        out *= (a - q * q) / den
    return out


def un_zero_gamma(n: int, m: complex) -> complex:
    """u_n(0;m) through the Gamma-function closed form."""
    m = complex(m)
    g = gamma_complex
    return (g(0.25 - m / 2 - n / 2) * g(0.75 - m / 2 + n / 2)) / (
        g(0.25 - m / 2 + n / 2) * g(0.75 - m / 2 - n / 2)
    )


def un_zero_backlund(n: int, m) -> Fraction:
    """u_n(0;m) by iterating the Backlund map evaluated at x = 0.

    At x = 0 the map reduces to u_{k+1}(0) = -(beta_k + 2) / ((alpha_k + 2) u_k(0))
    with alpha_k = 4(k+m), beta_k = 4(k-m).
    """
    m = Fraction(m)
    u = Fraction(1)
    for k in range(n):
        den = (4 * (k + m) + 2) * u
        if den == 0:
            raise HalfIntegerM(f"m = {m}")
        u = -(4 * (k - m) + 2) / den
    return u


# -- determinant (Wronskian) formula ---------------------------------------------

def _binom(a: Fraction, i: int) -> Fraction:
    out = Fraction(1)
    for t in range(i):
        out = out * (a - t) / (t + 1)
    return out


def laguerre_moment(k: int, x, m):
    """c_k = [y^k] (1 + y/2)^{m+1/2} e^{xy}; x may be a Fraction or GaussRational."""
    if k < 0:
        return Fraction(0)
    m = Fraction(m)
    a = m + Fraction(1, 2)
    out = 0
    xp = Fraction(1)
    fact = 1
    for j in range(k + 1):
        if j:
            xp = xp * x
            fact *= j
        out = out + _binom(a, k - j) / 2 ** (k - j) * xp / fact
    return out


def exact_det(rows: list[list]):
    """Determinant by Gaussian elimination over an exact field."""
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det = det * piv
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] / piv
                for cc in range(c + 1, n):
                    a[r][cc] = a[r][cc] - f * a[c][cc]
    return det


def wronskian_det(n: int, x, m):
    """det(c_{2j-k})_{j,k=1..n}; 1 for n = 0."""
    if n == 0:
        return Fraction(1)
    cache = {k: laguerre_moment(k, x, m) for k in range(-n, 2 * n)}
    return exact_det([[cache[2 * j - k] for k in range(1, n + 1)] for j in range(1, n + 1)])


def double_factorial_product_exact(n: int) -> int:
    out, df = 1, 1
    for ell in range(1, n + 1):
        df *= 2 * ell - 1
        out *= df
    return out


def wronskian_prefactor_log2(n: int, m, sign: int = +1) -> Fraction:
    """Power of two multiplying prod (2l-1)!! * det(c_{2j-k}).

    sign=+1 is the bookkeeping confirmed against the recurrence,
    2^{n^2/2 - mn} * 2^{n(m+1/2)} = 2^{n(n+1)/2}; sign=-1 reproduces the
    alternative 2^{mn - n^2/2} * 2^{n(m+1/2)}.
    """
    m = Fraction(m)
    return sign * (Fraction(n * n, 2) - m * n) + n * (m + Fraction(1, 2))


def wronskian_2jk_check(n: int, x, m, sign: int = +1):
    """s_n(x;m) minus the determinant formula; exact zero when the identity holds.

    Falls back to floats (returns a float residual) when the power of two is
    not an integer.
    """
    if n < 0:
        raise ValueError("n >= 0 required")
    m = Fraction(m)
    s = umemura_poly(n, m)(x)
    if n == 0:
        return s - 1
    e = wronskian_prefactor_log2(n, m, sign)
    base = double_factorial_product_exact(n) * wronskian_det(n, x, m)
    if e.denominator == 1:
        return s - base * Fraction(2) ** int(e)
    return complex(s) - complex(base) * 2.0 ** float(e)


__all__ = [
    "HalfIntegerM",
    "NonDivisible",
    "NonExactPower",
    "UmemuraSequence",
    "umemura_extend",
    "umemura_sequence",
    "umemura_poly",
    "umemura_taylor",
    "taylor_eval",
    "phi_closed",
    "un_zero_product",
    "un_zero_gamma",
    "un_zero_backlund",
    "un_from_umemura",
    "laguerre_moment",
    "wronskian_det",
    "wronskian_2jk_check",
    "GaussRational",
]
