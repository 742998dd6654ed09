"""Bessel J0/J1, complex Gamma, Barnes G and the double-factorial product."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

ZETA_PRIME_M1 = -0.16542114370045092921  # zeta'(-1)
GLAISHER = 1.2824271291006226369  # A = exp(1/12 - zeta'(-1))
LOG_2PI = math.log(2 * math.pi)

# B_2, B_4, ..., B_24
_BERNOULLI = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30), Fraction(5, 66),
    Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510), Fraction(43867, 798),
    Fraction(-174611, 330), Fraction(854513, 138), Fraction(-236364091, 2730),
]


class GammaPole(ArithmeticError):
    """Gamma evaluated at a non-positive integer."""


@dataclass(frozen=True)
class SpecFunResult:
    value: complex
    errEst: float


def _is_nonpos_int(z: complex, tol: float = 0.0) -> bool:
    return z.imag == 0 and z.real <= 0 and abs(z.real - round(z.real)) <= tol


# -- Bessel -------------------------------------------------------------------

def _bessel_series(nu: int, x: complex) -> complex:
    # summed exactly in rationals so cancellation on the real axis costs nothing
    xr = Fraction(x.real)
    xi = Fraction(x.imag)
    h2r, h2i = (xr * xr - xi * xi) / 4, (xr * xi) / 2  # (x/2)^2
    tr, ti = Fraction(1), Fraction(0)
    if nu == 1:
        tr, ti = xr / 2, xi / 2
    sr, si = tr, ti
    k = 0
    while True:
        k += 1
        div = -k * (k + nu)
        tr, ti = (tr * h2r - ti * h2i) / div, (tr * h2i + ti * h2r) / div
        sr += tr
        si += ti
        if k > 8 and abs(float(tr)) + abs(float(ti)) < 1e-40:
            break
    return complex(float(sr), float(si))


def _bessel_asymptotic(nu: int, x: complex) -> complex:
    mu = 4 * nu * nu
    p, q = 0j, 0j
    term = 1 + 0j
    k = 0
    best = math.inf
    while k < 60:
        # term_k = a_k(nu) / x^k
        if k % 2 == 0:
            p += (-1) ** (k // 2) * term
        else:
            q += (-1) ** (k // 2) * term
        nxt = term * (mu - (2 * k + 1) ** 2) / ((k + 1) * 8 * x)
        if abs(nxt) >= best and k > 4:
            break
        best = abs(nxt)
        term = nxt
        k += 1
        if abs(term) < 1e-17:
            break
    chi = x - (nu / 2 + 0.25) * math.pi
    return cmath.sqrt(2 / (math.pi * x)) * (p * cmath.cos(chi) - q * cmath.sin(chi))


def bessel_j(nu: int, x: complex) -> complex:
    """J_nu(x) for nu in {0, 1}: power series for |x| <= 12, Hankel expansion beyond."""
    if nu not in (0, 1):
        raise ValueError("only nu = 0, 1 are supported")
    x = complex(x)
    if abs(x) <= 12:
        return _bessel_series(nu, x)
    if x.real < 0:
        # J_nu(-x) = (-1)^nu J_nu(x) keeps the argument in the right half-plane
        return (-1) ** nu * _bessel_asymptotic(nu, -x)
    return _bessel_asymptotic(nu, x)


# -- Gamma --------------------------------------------------------------------

def loggamma(z: complex) -> complex:
    """A logarithm of Gamma(z) (Stirling series after an upward shift).

    The branch is continuous in z off the negative axis but is not the
    principal log-Gamma branch; only exp(loggamma) and differences are used.
    """
    z = complex(z)
    if _is_nonpos_int(z):
        raise GammaPole(f"Gamma pole at {z}")
    if z.real < 0.5:
        s = cmath.sin(math.pi * z)
        if s == 0:
            raise GammaPole(f"Gamma pole at {z}")
        return math.log(math.pi) - cmath.log(s) - loggamma(1 - z)
    shift = 0j
    while z.real < 15 or abs(z) < 15:
        shift += cmath.log(z)
        z += 1
    inv = 1 / z
    inv2 = inv * inv
    acc = 0j
    p = inv
    for k, b in enumerate(_BERNOULLI, start=1):
        acc += float(b) / (2 * k * (2 * k - 1)) * p
        p *= inv2
    return (z - 0.5) * cmath.log(z) - z + 0.5 * LOG_2PI + acc - shift


def gamma_complex(z: complex) -> complex:
    """Gamma(z) for complex z; GammaPole at non-positive integers."""
    z = complex(z)
    if _is_nonpos_int(z):
        raise GammaPole(f"Gamma pole at {z}")
    if z.imag == 0 and z.real > 0 and z.real < 171:
        return complex(math.gamma(z.real))
    return cmath.exp(loggamma(z))


# -- Barnes G -------------------------------------------------------------------

def _log_barnes_asym(w: complex) -> complex:
    """log G(w + 1) for large |w|."""
    lw = cmath.log(w)
    out = (w * w / 2 - 1 / 12) * lw - 0.75 * w * w + 0.5 * w * LOG_2PI + ZETA_PRIME_M1
    w2 = w * w
    p = 1 / w2
    for k in range(1, len(_BERNOULLI)):
        out += float(_BERNOULLI[k]) / (4 * k * (k + 1)) * p
        p /= w2
        if abs(p) < 1e-30:
            break
    return out


def log_barnes_g(z: complex) -> complex:
    """A logarithm of G(z); raises GammaPole on the zero set."""
    z = complex(z)
    if _is_nonpos_int(z):
        raise GammaPole(f"Barnes G zero at {z}")
    n = 0
    acc = 0j
    w = z
    while w.real < 20 or abs(w) < 20:
        acc += loggamma(w)
        w += 1
        n += 1
    # G(z) = G(z + n) / prod_{k<n} Gamma(z + k)
    return _log_barnes_asym(w - 1) - acc


def barnes_g(z: complex) -> complex:
    """Barnes G(z); exact 0 on z = 0, -1, -2, ..."""
    z = complex(z)
    if _is_nonpos_int(z):
        return 0j
    if z.imag == 0 and z.real.is_integer() and z.real <= 20:
        out = 1
        for k in range(1, int(z.real) - 1):
            out *= math.factorial(k)
        return complex(out)
    return cmath.exp(log_barnes_g(z))


# -- double-factorial product -----------------------------------------------------

def double_factorial_product(n: int) -> int:
    """prod_{l=1}^{n} (2l-1)!! as an exact integer."""
    out, df = 1, 1
    for ell in range(1, n + 1):
        df *= 2 * ell - 1
        out *= df
    return out


def log_double_factorial_product(n: int) -> float:
    """log of prod_{l=1}^{n} (2l-1)!! via log-Gamma sums."""
    # (2l-1)!! = 2^l Gamma(l + 1/2) / sqrt(pi)
    return sum(ell * math.log(2) + math.lgamma(ell + 0.5) - 0.5 * math.log(math.pi) for ell in range(1, n + 1))


def log_double_factorial_product_asymptotic(n: int) -> float:
    """Leading large-n form of log prod_{l=1}^{n} (2l-1)!!."""
    return (
        (n * n / 2 + n / 2 + 1 / 24) * math.log(n)
        - 0.75 * n * n
        - n / 2
        + (n * n / 2 + n + 5 / 24) * math.log(2)
        - ZETA_PRIME_M1 / 2
    )
