"""Closed-form asymptotics and convergence-trend checks.

Every evaluator works with logarithms and exponentiates last, so that the
super-exponential growth of s_n(0;m) never overflows.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .fredholm import (
    BranchTrackingFailure,
    FredholmConfig,
    TruncationBudgetExceeded,
    lambda_of_m,
    logdet_nystrom,
    logdet_series,
    u_from_fredholm,
)
from .monodromy import MonodromyData, schlesinger_update
from .series import SeriesSolution, d8_series, u0_of_m
from .specfun import (
    ZETA_PRIME_M1,
    GammaPole,
    log_barnes_g,
    log_double_factorial_product_asymptotic,
    loggamma,
)

Parity = Literal["even", "odd"]
LOG2 = math.log(2)


class BarnesZero(ArithmeticError):
    """A Barnes G argument is a non-positive integer."""


class ExcludedReMu(ValueError):
    """Re mu is 0 or +-1/2, where the leading-term formula does not apply."""


# -- trend fitting -----------------------------------------------------------------

@dataclass(frozen=True)
class TrendReport:
    indices: list[int]
    values: list[float]
    rateEstimate: float
    passed: bool

    @property
    def pass_(self) -> bool:
        return self.passed


def fit_trend(indices, values, minRate: float = 0.7, last: int = 4) -> TrendReport:
    """Least-squares fit of log value = c - p log index over the last points."""
    idx = list(indices)[-last:]
    val = [float(v) for v in list(values)[-last:]]
    if len(idx) < 2 or any(v <= 0 for v in val):
        return TrendReport(list(indices), [float(v) for v in values], float("nan"), False)
    slope, _ = np.polyfit(np.log(idx), np.log(val), 1)
    p = float(-slope)
    return TrendReport(list(indices), [float(v) for v in values], p, p >= minRate)


def _check_parity(parity: str) -> None:
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")


def _lg(z: complex) -> complex:
    try:
        return log_barnes_g(z)
    except GammaPole as exc:
        raise BarnesZero(str(exc)) from None


# -- s_n(0;m) ---------------------------------------------------------------------

def log_sn0_asymptotic(j: int, m: complex, parity: Parity) -> complex:
    """log of the leading form of s_{2j}(0;m) (even) or s_{2j-1}(0;m) (odd)."""
    _check_parity(parity)
    m = complex(m)
    expo = m * m / 2 + m / 2 + 1 / 24
    lj = math.log(j)
    c = cmath.cos(math.pi * m)
    if parity == "even":
        out = 0.5 * math.log(2 * math.pi) + 4 * ZETA_PRIME_M1
        out += (2 * j * j + j + expo) * lj - 3 * j * j - j + (2 * j * j + 2 * j) * LOG2
        out += j * cmath.log(-c)
        out -= _lg(1.25 + m / 2) + _lg(1.25 - m / 2) + _lg(1.75 + m / 2) + _lg(0.75 - m / 2)
    else:
        out = -0.5 * math.log(2 * math.pi) + 4 * ZETA_PRIME_M1
        out += (2 * j * j - j + expo) * lj - 3 * j * j + j + 2 * j * j * LOG2
        out += j * cmath.log(c)
        out -= _lg(0.75 + m / 2) + _lg(0.75 - m / 2) + _lg(1.25 + m / 2) + _lg(0.25 - m / 2)
    return out


def sn0_asymptotic(j: int, m: complex, parity: Parity) -> complex:
    return cmath.exp(log_sn0_asymptotic(j, m, parity))


# -- Umemura ratio limits -----------------------------------------------------------

def _log_det(r: complex, cfg: FredholmConfig) -> complex:
    try:
        return logdet_series(r, cfg)
    except TruncationBudgetExceeded:
        return logdet_nystrom(r, cfg)


def _u_path(z: complex, m: complex, steps: int, U: SeriesSolution | None,
            cfg: FredholmConfig) -> list[complex]:
    """U at z*k/steps, k = 0..steps, by the series when it is trustworthy
    and by the Fredholm route otherwise."""
    out = [u0_of_m(m)]
    for k in range(1, steps + 1):
        zk = z * k / steps
        if U is not None:
            out.append(U(zk))
        else:
            out.append(u_from_fredholm(zk, m, cfg))
    return out


def umemura_ratio_rhs(z: complex, m: complex, parity: Parity, cfg: FredholmConfig | None = None,
                      steps: int = 16, U: SeriesSolution | None = None) -> complex:
    """e^{2iz} (U(z)/U(0))^{-+1/4} sqrt(D(32iz)), branches continued from z = 0.

    U defaults to the Maclaurin series when |z| <= 0.1 and to the Fredholm
    route otherwise."""
    _check_parity(parity)
    z = complex(z)
    if z == 0:
        return 1 + 0j
    if cfg is None:
        cfg = FredholmConfig(lambda_of_m(m))
    if U is None and abs(z) <= 0.1:
        U = d8_series(u0_of_m(m))
    vals = _u_path(z, m, steps, U, cfg)
    logU = 0j
    for a, b in zip(vals, vals[1:]):
        if not 1e-6 <= abs(b) <= 1e6:
            raise BranchTrackingFailure(f"|U| = {abs(b)} suggests a nearby pole or zero")
        inc = cmath.log(b / a)
        if abs(inc.imag) > 1.0:
            raise BranchTrackingFailure("phase of U jumps by more than 1 rad per step")
        logU += inc
    sgn = -1 if parity == "even" else 1
    return cmath.exp(2j * z + sgn * logU / 4 + _log_det(32j * z, cfg) / 2)


def umemura_ratio_integral(z: complex, m: complex, parity: Parity,
                           U: SeriesSolution | None = None, nodes: int = 40) -> complex:
    """exp of the integral of y U'^2/(8U^2) -+ U'/(4U) - U + 1/U over [0, z]."""
    _check_parity(parity)
    z = complex(z)
    if U is None:
        U = d8_series(u0_of_m(m))
    t, w = np.polynomial.legendre.leggauss(nodes)
    t = (t + 1) / 2
    w = w / 2
    sgn = -1 if parity == "even" else 1
    acc = 0j
    for tk, wk in zip(t, w):
        y = z * tk
        u, up = U(y), U.derivative(y)
        acc += wk * (y * up * up / (8 * u * u) + sgn * up / (4 * u) - u + 1 / u)
    return cmath.exp(z * acc)


def origin_limits(m: complex) -> tuple[complex, complex]:
    """Limits of u_{2j}(0;m) and u_{2j+1}(0;m): tan and -cot of pi(m+1/2)/2."""
    t = u0_of_m(m)
    return t, -1 / t


# -- leading terms at x = 0 -----------------------------------------------------------

def _eps(mu: complex) -> int:
    re = mu.real
    if re == 0 or abs(re) >= 0.5:
        raise ExcludedReMu(f"Re mu = {re}")
    return 1 if re > 0 else -1


def _monodromy_factor(d: MonodromyData, eps: int) -> complex:
    e0s, eis, e1s, e2s = d.e0**2, d.eInf**2, d.e1**2, d.e2**2
    f = e0s * e2s * eis * (e0s - e1s) * (e1s - eis) / (e0s * e1s - 1) ** 2
    return f if eps > 0 else 1 / f


def un_leading_coefficient(n: int, d: MonodromyData) -> tuple[complex, complex]:
    """(c, p) with u_n(x) ~ c x^p as x -> 0 for the n-th iterate of d."""
    d.check_generic()
    dn = schlesinger_update(d, n)
    mu = dn.mu
    eps = _eps(mu)
    em = eps * mu
    t0, ti = d.theta0, d.thetaInf
    try:
        lg = (2 * loggamma(1 - 2 * em) + loggamma(-n / 2 + em - t0 / 2) + loggamma(n / 2 + em - ti / 2 + 1)
              - 2 * loggamma(2 * em) - loggamma(-n / 2 - em - t0 / 2 + 1) - loggamma(n / 2 - em - ti / 2 + 1))
    except GammaPole as exc:
        raise ArithmeticError(f"leading coefficient hits a Gamma pole: {exc}") from None
    return -cmath.exp(lg) * _monodromy_factor(dn, eps), 4 * em - 1


def un_leading(n: int, x: complex, d: MonodromyData) -> complex:
    c, p = un_leading_coefficient(n, d)
    return c * complex(x) ** p


def prop15_leading(x: complex, d: MonodromyData, alpha: complex, beta: complex) -> complex:
    """Leading small-x term of the solution with data d and parameters (alpha, beta)."""
    if abs(complex(alpha) - d.alpha) > 1e-12 or abs(complex(beta) - d.beta) > 1e-12:
        raise ValueError("(alpha, beta) inconsistent with (Theta0, ThetaInf)")
    d.check_generic()
    eps = _eps(d.mu)
    em = eps * d.mu
    a8, b8 = complex(alpha) / 8, complex(beta) / 8
    lg = (2 * loggamma(1 - 2 * em) + loggamma(em - a8) + loggamma(em + b8 + 0.5)
          - 2 * loggamma(2 * em) - loggamma(-em - a8 + 1) - loggamma(-em + b8 + 0.5))
    return -cmath.exp(lg) * _monodromy_factor(d, eps) * complex(x) ** (4 * em - 1)


def thm18_leading(z: complex, d: MonodromyData) -> complex:
    """Leading small-z term of the D8 solution attached to the data d."""
    d.check_generic()
    eps = _eps(d.mu)
    em = eps * d.mu
    e0s, eis, e1s, e2s = d.e0**2, d.eInf**2, d.e1**2, d.e2**2
    f = e0s * e2s * eis * (eis - e1s) / (e0s * e1s - 1)
    lg = 2 * loggamma(1 - 2 * em) - 2 * loggamma(2 * em) - (4 * em - 1) * LOG2
    return -cmath.exp(lg) * complex(z) ** (4 * em - 1) * (f if eps > 0 else 1 / f)


def thm18_consistency(z: complex, d: MonodromyData, ns=(8, 16, 32)) -> list[float]:
    """|u_n-leading(z/n) / thm18(z) - 1| along even n."""
    ref = thm18_leading(z, d)
    return [abs(un_leading(n, complex(z) / n, d) / ref - 1) for n in ns]


# -- 2j-k determinants ----------------------------------------------------------------

def log_dets_2jk_asymptotic(z: complex, m: complex, parity: Parity, j: int,
                            cfg: FredholmConfig | None = None, corrected: bool = True) -> complex:
    """log of the large-j form of D_{2j}(z/(2j+1)) (even) or D_{2j-1}(z/(2j)) (odd).

    With corrected=True the factor 2^{2mn - n^2} (n the determinant size) is
    included, matching s_n = prod (2l-1)!! 2^{n^2/2 - mn} D_n."""
    _check_parity(parity)
    m = complex(m)
    lj = math.log(j)
    c = cmath.cos(math.pi * m)
    out = -j * (2 * m + 1) * LOG2 + (m * m / 2 + m / 2) * lj + 0.25 * LOG2 + 4.5 * ZETA_PRIME_M1
    if parity == "even":
        n = 2 * j
        out += j * cmath.log(-c) + 0.5 * math.log(math.pi)
        out -= _lg(0.75 - m / 2) + _lg(1.25 - m / 2) + _lg(1.25 + m / 2) + _lg(1.75 + m / 2)
    else:
        n = 2 * j - 1
        out += j * cmath.log(c) + m * LOG2 - 0.5 * math.log(math.pi)
        out -= _lg(0.25 - m / 2) + _lg(0.75 - m / 2) + _lg(0.75 + m / 2) + _lg(1.25 + m / 2)
    if corrected:
        out += (2 * m * n - n * n) * LOG2
    if complex(z) != 0:
        out += cmath.log(umemura_ratio_rhs(z, m, parity, cfg))
    return out


def dets_2jk_asymptotic(z: complex, m: complex, parity: Parity, j: int,
                        cfg: FredholmConfig | None = None, corrected: bool = True) -> complex:
    return cmath.exp(log_dets_2jk_asymptotic(z, m, parity, j, cfg, corrected))


def log_dets_2jk_composite(m: complex, parity: Parity, j: int) -> complex:
    """The z = 0 constant rebuilt from the s_n(0) and double-factorial
    asymptotics, with the corrected power of two."""
    n = 2 * j if parity == "even" else 2 * j - 1
    return (log_sn0_asymptotic(j, m, parity) + (complex(m) * n - n * n / 2) * LOG2
            - log_double_factorial_product_asymptotic(n))


# -- u_n(0) ratio recursion ---------------------------------------------------------------

def _ratio(n: int, nu: complex, t0: complex, ti: complex) -> complex:
    """u_{n+2}(0)/u_n(0) from the Gamma factors of the leading term, nu = eps mu_n."""
    return ((n + 2 * nu + 2 - ti) * (n + 2 * nu + t0)) / ((n + 2 - 2 * nu + t0) * (n + 2 - 2 * nu - ti))


def un0_ratio_recursion(k: int, d: MonodromyData, printed: bool = False) -> tuple[complex, complex]:
    """(u_{2k+2}(0)/u_{2k}(0), u_{2k+1}(0)/u_{2k-1}(0)) in terms of k, mu, Theta0, ThetaInf.

    printed=True evaluates the form with mu_n in place of eps_n mu_n and
    1 - ThetaInf in the even numerator, which disagrees with the Gamma
    closed form; it is kept only to document the discrepancy."""
    t0, ti = d.theta0, d.thetaInf
    mu_e = schlesinger_update(d, 0).mu
    mu_o = schlesinger_update(d, 1).mu
    if printed:
        even = ((2 * k + 2 * mu_e + t0) * (2 * k + 2 * mu_e + 1 - ti)) / (
            (2 + 2 * k - 2 * mu_e + t0) * (2 + 2 * k - 2 * mu_e - ti))
        odd = ((2 * k - 1 + 2 * mu_o + t0) * (2 * k + 1 + 2 * mu_o - ti)) / (
            (2 * k + 1 - 2 * mu_o + t0) * (2 * k + 1 - 2 * mu_o - ti))
        return even, odd
    nu_e = _eps(mu_e) * mu_e
    nu_o = _eps(mu_o) * mu_o
    return _ratio(2 * k, nu_e, t0, ti), _ratio(2 * k - 1, nu_o, t0, ti)


def un0_ratio_recursion_exact(k: int, m) -> tuple[Fraction, Fraction]:
    """The same ratios for the rational family in exact arithmetic
    (Theta0 = m, ThetaInf = m + 1, eps_n mu_n = 1/4 for every n)."""
    m = Fraction(m)
    nu = Fraction(1, 4)

    def r(n):
        return ((n + 2 * nu + 2 - (m + 1)) * (n + 2 * nu + m)) / ((n + 2 - 2 * nu + m) * (n + 2 - 2 * nu - (m + 1)))

    return r(2 * k), r(2 * k - 1)


# -- exact routes for the trend checks ---------------------------------------------------

def _scaled_point(z: complex, n: int):
    """z/n as an exact Gaussian rational (z rounded to 1e-12)."""
    from .exact import GaussRational

    z = complex(z)
    re = Fraction(round(z.real * 10**12), 10**12) / n
    im = Fraction(round(z.imag * 10**12), 10**12) / n
    return GaussRational(re, im)


def umemura_ratio_exact(n: int, m, z: complex, order: int = 30) -> complex:
    """s_n(z/(n+1);m)/s_n(0;m) from exact Taylor coefficients."""
    from .umemura import taylor_eval, umemura_taylor

    c = umemura_taylor(n, Fraction(m), order)
    c = [ci / c[0] for ci in c]
    return complex(taylor_eval(c, _scaled_point(z, n + 1)))


def log_dets_2jk_exact(n: int, m, z: complex) -> complex:
    """log D_n(z/(n+1);m) with D_n = 2^{n(m+1/2)} det(c_{2j-k})."""
    from .umemura import wronskian_det

    m = Fraction(m)
    det = wronskian_det(n, _scaled_point(z, n + 1), m)
    re, im = Fraction(det.re), Fraction(det.im)
    # scale before converting: the determinant can leave float range
    big = max(abs(re), abs(im))
    k = (big.numerator.bit_length() - big.denominator.bit_length())
    w = complex(float(re / Fraction(2) ** k), float(im / Fraction(2) ** k))
    return cmath.log(w) + (k + n * float(m + Fraction(1, 2))) * LOG2


def umemura_ratio_trend(m, z: complex, js=(6, 12, 24), parity: Parity = "even",
                        cfg: FredholmConfig | None = None) -> TrendReport:
    rhs = umemura_ratio_rhs(z, complex(m), parity, cfg)
    errs = []
    for j in js:
        n = 2 * j if parity == "even" else 2 * j - 1
        errs.append(abs(umemura_ratio_exact(n, m, z) - rhs))
    return fit_trend(list(js), errs)


def sn0_trend(m, js=(5, 10, 20), parity: Parity = "even") -> TrendReport:
    from .umemura import phi_closed

    m = Fraction(m)
    errs = []
    for j in js:
        n = 2 * j if parity == "even" else 2 * j - 1
        ex = phi_closed(n, m + Fraction(1, 2))
        lex = math.log(abs(ex.numerator)) - math.log(ex.denominator)
        la = log_sn0_asymptotic(j, complex(m), parity)
        sign_ok = (ex > 0) == (math.cos(la.imag) > 0)
        errs.append(abs(cmath.exp(lex - la.real) - 1) if sign_ok else float("inf"))
    return fit_trend(list(js), errs)
