"""Bessel-kernel Fredholm determinant D_lambda(r) = det(1 - lambda K_r) on L^2(0, r).

K(x, y) = [sqrt(x) J1(sqrt(x)) J0(sqrt(y)) - J0(sqrt(x)) sqrt(y) J1(sqrt(y))] / (2(x - y)).

Two independent routes to ln D: the trace multi-sum expanded in powers of r,
and Nystrom discretization on Gauss-Legendre nodes. sigma(r) = r d/dr ln D
satisfies (r s'')^2 = s'(4s' + 1)(s - r s').
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exact import RationalPoly, poly_div_exact
from .series import d8_series, u0_of_m
from .specfun import bessel_j


class DegenerateLambda(ValueError):
    """lambda(m) is infinite, or lambda is 0 or 1 where the sigma recurrence degenerates."""


class QuadratureDivergence(ArithmeticError):
    """Nystrom values changed by more than the error budget under node doubling."""


class TruncationBudgetExceeded(ArithmeticError):
    """|r| lies outside the validated range of the r-power series."""


class BranchTrackingFailure(ArithmeticError):
    """The two roots for U collide along the continuation path."""


@dataclass(frozen=True)
class FredholmConfig:
    lam: complex
    quadOrder: int = 64
    seriesOrder: int = 48
    fdStep: float = 0.25
    seriesBudget: float = 4.0
    seriesSwitch: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        if self.quadOrder < 16:
            raise ValueError("quadOrder >= 16 required")
        if self.seriesOrder < 4:
            raise ValueError("seriesOrder >= 4 required")


@dataclass(frozen=True)
class FredholmEval:
    r: complex
    logDet: complex
    sigma: complex
    sigmaPrime: complex
    sigmaSecond: complex
    method: str
    errEst: float

    def sigma_form_residual(self) -> complex:
        s, s1, s2, r = self.sigma, self.sigmaPrime, self.sigmaSecond, self.r
        return (r * s2) ** 2 - s1 * (4 * s1 + 1) * (s - r * s1)


def lambda_of_m(m: complex) -> complex:
    """lambda(m) = 1 / (1 + e^{2 pi i m})."""
    d = 1 + cmath.exp(2j * math.pi * complex(m))
    if abs(d) < 1e-14:
        raise DegenerateLambda(f"m = {m} lies on Z + 1/2")
    return 1 / d


# -- kernel -------------------------------------------------------------------

def _j0_sqrt(t: np.ndarray) -> np.ndarray:
    """J0(sqrt t) as an entire series in t."""
    out = np.zeros_like(t, dtype=complex)
    term = np.ones_like(t, dtype=complex)
    for k in range(200):
        out += term
        term = term * (-t / 4) / ((k + 1) ** 2)
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(out), 1e-300)):
            break
    return out


def _sqrt_j1_sqrt(t: np.ndarray) -> np.ndarray:
    """sqrt(t) J1(sqrt t) as an entire series in t."""
    out = np.zeros_like(t, dtype=complex)
    term = t / 2 + 0j
    for k in range(200):
        out += term
        term = term * (-t / 4) / ((k + 1) * (k + 2))
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(out), 1e-300)):
            break
    return out


@lru_cache(maxsize=8)
def _kernel_series_table(M: int) -> np.ndarray:
    a = np.zeros((M, M))
    for i in range(M):
        for j in range(M):
            a[i, j] = (-1) ** (i + j) * 2.0 ** (-2 * (i + j + 1)) / (
                math.factorial(i) ** 2 * math.factorial(j) ** 2 * (i + j + 1)
            )
    return a


def bessel_kernel_series(x, y, M: int = 40):
    """Double power series of the kernel; accurate for moderate |x|, |y|."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    a = _kernel_series_table(M)
    px = np.stack([x**i for i in range(M)], axis=-1)
    py = np.stack([y**j for j in range(M)], axis=-1)
    return np.einsum("...i,ij,...j->...", px, a, py)


def bessel_kernel(x, y, tol: float = 1e-2):
    """K(x, y); closed form away from the diagonal, double series near it."""
    scalar = np.isscalar(x) and np.isscalar(y)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    x, y = np.broadcast_arrays(x, y)
    near = np.abs(x - y) <= tol * np.maximum(1.0, np.maximum(np.abs(x), np.abs(y)))
    out = np.empty(x.shape, dtype=complex)
    if np.any(near):
        out[near] = bessel_kernel_series(x[near], y[near])
    far = ~near
    if np.any(far):
        xf, yf = x[far], y[far]
        out[far] = (_sqrt_j1_sqrt(xf) * _j0_sqrt(yf) - _j0_sqrt(xf) * _sqrt_j1_sqrt(yf)) / (2 * (xf - yf))
    return complex(out) if scalar else out


def bessel_kernel_scalar(x: complex, y: complex) -> complex:
    """Closed form through specfun.bessel_j (any branch of the square roots works)."""
    sx, sy = cmath.sqrt(x), cmath.sqrt(y)
    return (sx * bessel_j(1, sx) * bessel_j(0, sy) - bessel_j(0, sx) * sy * bessel_j(1, sy)) / (2 * (x - y))


# -- Nystrom ------------------------------------------------------------------

@lru_cache(maxsize=16)
def _legendre01(n: int):
    t, w = np.polynomial.legendre.leggauss(n)
    return (t + 1) / 2, w / 2


def _nystrom_matrix(r: complex, n: int) -> np.ndarray:
    s, w = _legendre01(n)
    sw = np.sqrt(w)
    x = r * s
    K = bessel_kernel(x[:, None], x[None, :])
    return r * sw[:, None] * K * sw[None, :]


def _slogdet(r: complex, lam: complex, n: int) -> complex:
    if r == 0:
        return 0j
    A = _nystrom_matrix(r, n)
    sign, logabs = np.linalg.slogdet(np.eye(n) - lam * A)
    return logabs + 1j * cmath.phase(sign)


def trace_powers(r: complex, L: int, cfg: FredholmConfig) -> list[complex]:
    """Tr K_r^l for l = 1..L on the Nystrom nodes."""
    if L < 1:
        raise ValueError("L >= 1 required")
    A = _nystrom_matrix(complex(r), cfg.quadOrder)
    out, P = [], np.eye(cfg.quadOrder, dtype=complex)
    for _ in range(L):
        P = P @ A
        out.append(complex(np.trace(P)))
    return out


def logdet_nystrom(r: complex, cfg: FredholmConfig, steps: int = 16) -> complex:
    """ln D by Nystrom; imaginary part continued along the segment [0, r]."""
    r = complex(r)
    if r == 0:
        return 0j
    lam = complex(cfg.lam)
    prev = 0.0
    val = 0j
    for k in range(1, steps + 1):
        val = _slogdet(r * k / steps, lam, cfg.quadOrder)
        im = val.imag + 2 * math.pi * round((prev - val.imag) / (2 * math.pi))
        prev = im
        val = complex(val.real, im)
    return val


# -- trace multi-sum in powers of r ---------------------------------------------

@lru_cache(maxsize=8)
def _trace_table(N: int, exact: bool = False):
    """tab[l][s] = [t^s] Tr (D(t) H)^{2l}, D = diag(t^a/(a!)^2), H_ab = 1/(a+b+1).

    Needed for l = 1..N, s = 0..N-l.
    """
    size = N + 1
    if exact:
        H = [[Fraction(1, a + b + 1) for b in range(size)] for a in range(size)]
        wts = [Fraction(1, math.factorial(a) ** 2) for a in range(size)]
    else:
        H = np.array([[1.0 / (a + b + 1) for b in range(size)] for a in range(size)])
        wts = np.array([1.0 / math.factorial(a) ** 2 for a in range(size)])
    D = N  # max t-degree tracked
    tab = {}
    if exact:
        # P[a][c][s]
        P = [[[Fraction(int(a == c)) if s == 0 else Fraction(0) for s in range(D + 1)] for c in range(size)] for a in range(size)]
        for step in range(1, 2 * N + 1):
            new = [[[Fraction(0)] * (D + 1) for _ in range(size)] for _ in range(size)]
            for a in range(size):
                for b in range(size):
                    row = P[a][b]
                    if not any(row):
                        continue
                    for c in range(size):
                        f = wts[b] * H[b][c]
                        tgt = new[a][c]
                        for s in range(D + 1 - b):
                            if row[s]:
                                tgt[s + b] += row[s] * f
            P = new
            if step % 2 == 0:
                ell = step // 2
                tab[ell] = [sum(P[a][a][s] for a in range(size)) for s in range(N - ell + 1)]
        return tab
    P = np.zeros((size, size, D + 1))
    for a in range(size):
        P[a, a, 0] = 1.0
    for step in range(1, 2 * N + 1):
        new = np.zeros_like(P)
        for b in range(size):
            if b > D:
                break
            f = wts[b] * H[b, :]
            new[:, :, b:] += P[:, b, : D + 1 - b][:, None, :] * f[None, :, None]
        P = new
        if step % 2 == 0:
            ell = step // 2
            tr = np.einsum("aas->s", P)
            tab[ell] = list(tr[: N - ell + 1])
    return tab


@lru_cache(maxsize=64)
def logdet_coeffs(lam, N: int, exact: bool = False) -> list:
    """Coefficients c_1..c_N (index d) of ln D_lambda(r) = sum_d c_d r^d.

    exact=True returns, for each d, a RationalPoly in lambda.
    """
    tab = _trace_table(N, exact)
    out = [0] * (N + 1)
    for d in range(1, N + 1):
        if exact:
            coef = [Fraction(0)] * (d + 1)
            for ell in range(1, d + 1):
                s = d - ell
                coef[ell] = -Fraction(1, ell) * Fraction(1, 4**ell) * Fraction(-1, 4) ** s * tab[ell][s]
            out[d] = RationalPoly.from_coeffs(coef)
        else:
            acc = 0j
            for ell in range(1, d + 1):
                s = d - ell
                acc += -(lam**ell) / ell / 4**ell * (-0.25) ** s * tab[ell][s]
            out[d] = acc
    return out


def logdet_series(r: complex, cfg: FredholmConfig) -> complex:
    """ln D from the trace multi-sum truncated at total degree cfg.seriesOrder."""
    r = complex(r)
    if abs(r) > cfg.seriesBudget:
        raise TruncationBudgetExceeded(f"|r| = {abs(r)} > {cfg.seriesBudget}")
    c = logdet_coeffs(complex(cfg.lam), cfg.seriesOrder)
    v = 0j
    for d in range(cfg.seriesOrder, 0, -1):
        v = (v + c[d]) * r
    return v


# -- sigma --------------------------------------------------------------------

def sigma_series_coeffs(lam, K: int) -> list:
    """Taylor coefficients s_1..s_K of sigma (index 0 holds 0).

    Branch s_2 = lambda(1-lambda)/16. For k >= 3 the r^k coefficient of the
    sigma-form gives (k-1)(4k s_2 - lambda(1-lambda)/4) s_k = -R_k with R_k
    collecting products of lower coefficients. Passing lam as a RationalPoly
    (e.g. RationalPoly.x()) runs the recurrence with polynomial coefficients.
    """
    symbolic = isinstance(lam, RationalPoly)
    if not symbolic and (lam == 0 or lam == 1):
        raise DegenerateLambda("lambda must differ from 0 and 1")
    s = [0 * lam, -lam * Fraction(1, 4) if symbolic else -lam / 4]
    base = lam * (1 - lam) * Fraction(1, 16) if symbolic else lam * (1 - lam) / 16
    s.append(base)
    for k in range(3, K + 1):
        acc = 0 * lam
        # (r s'')^2 : a + b = k + 2, a, b >= 2, both < k
        for a in range(3, k):
            b = k + 2 - a
            if 2 <= b < k:
                acc = acc + a * (a - 1) * b * (b - 1) * s[a] * s[b]
        # -4 s'^2 (s - r s') : a + b + c = k + 2, a, b >= 1, c >= 2, none equal to k
        for c in range(2, k):
            for a in range(1, k + 2 - c):
                b = k + 2 - c - a
                if 1 <= b < k and a < k:
                    acc = acc - 4 * a * b * (1 - c) * s[a] * s[b] * s[c]
        # -s'(s - r s') : a + c = k + 1, c >= 2, c < k
        for c in range(2, k):
            a = k + 1 - c
            acc = acc - a * (1 - c) * s[a] * s[c]
        if symbolic:
            div = lam * (1 - lam) * Fraction((k - 1) ** 2, 4)
            s.append(-poly_div_exact(acc, div))
        else:
            s.append(-acc / ((k - 1) * (4 * k * base - lam * (1 - lam) / 4)))
    return s[: K + 1]


def _series_eval(r: complex, cfg: FredholmConfig) -> FredholmEval:
    c = logdet_coeffs(complex(cfg.lam), cfg.seriesOrder)
    N = cfg.seriesOrder
    L = sum(c[d] * r**d for d in range(1, N + 1))
    sig = sum(d * c[d] * r**d for d in range(1, N + 1))
    s1 = sum(d * d * c[d] * r ** (d - 1) for d in range(1, N + 1))
    s2 = sum(d * d * (d - 1) * c[d] * r ** (d - 2) for d in range(2, N + 1))
    err = abs(c[N] * r**N)
    return FredholmEval(r, L, sig, s1, s2, "series", err)


def _nystrom_eval(r: complex, cfg: FredholmConfig, points: int = 32, need_logdet: bool = True) -> FredholmEval:
    # derivatives by a circular difference stencil: f^(k)(r) ~ k!/(P rho^k) sum f_j w^{-jk}
    lam = complex(cfg.lam)
    rho = cfg.fdStep * max(1.0, min(abs(r), 2.0))
    L0 = logdet_nystrom(r, cfg) if need_logdet else complex("nan")
    base = _slogdet(r, lam, cfg.quadOrder)
    w = np.exp(2j * np.pi * np.arange(points) / points)
    f = np.array([_slogdet(r + rho * wj, lam, cfg.quadOrder) - base for wj in w])
    # unwrap the imaginary parts around the circle
    im = np.unwrap(np.imag(f))
    im -= 2 * np.pi * round(im[0] / (2 * np.pi))
    f = np.real(f) + 1j * im
    der = [np.sum(f * w ** (-k)) / (points * rho**k) * math.factorial(k) for k in range(4)]
    L1, L2, L3 = der[1], der[2], der[3]
    sig = r * L1
    s1 = L1 + r * L2
    s2 = 2 * L2 + r * L3
    err = float(abs(np.sum(f * w ** (-(points // 2)))) / points)
    return FredholmEval(r, L0, complex(sig), complex(s1), complex(s2), "nystrom", err)


def sigma_and_prime(r: complex, cfg: FredholmConfig, method: str | None = None,
                    need_logdet: bool = True) -> FredholmEval:
    """ln D, sigma, sigma', sigma'' at r; series for |r| <= seriesSwitch by default.

    need_logdet=False skips the path-continued ln D on the Nystrom route
    (logDet is then NaN).
    """
    r = complex(r)
    if method is None:
        method = "series" if abs(r) <= cfg.seriesSwitch else "nystrom"
    if method == "series":
        return _series_eval(r, cfg)
    if method == "nystrom":
        return _nystrom_eval(r, cfg, need_logdet=need_logdet)
    raise ValueError(f"unknown method {method!r}")


# -- U(z; m) from sigma ------------------------------------------------------------

def u_from_fredholm(z: complex, m: complex, cfg: FredholmConfig | None = None,
                    steps: int = 8, collision_tol: float = 1e-6) -> complex:
    """Solve U - 1/U = -16 i sigma'(32 i z) - 2 i, continuing the root from U(0;m).

    The segment [0, z] is cut into `steps` pieces (at most 64); at each node
    the root nearest to the previous one is kept.
    """
    if not 1 <= steps <= 64:
        raise ValueError("steps must lie in 1..64")
    z = complex(z)
    if cfg is None:
        cfg = FredholmConfig(lambda_of_m(m))
    U = u0_of_m(m)
    if z == 0:
        return U
    for k in range(1, steps + 1):
        zk = z * k / steps
        b = -16j * sigma_and_prime(32j * zk, cfg, need_logdet=False).sigmaPrime - 2j
        disc = cmath.sqrt(b * b + 4)
        r1, r2 = (b + disc) / 2, (b - disc) / 2
        if abs(r1 - r2) < collision_tol:
            raise BranchTrackingFailure(f"roots collide near z = {zk}")
        U = r1 if abs(r1 - U) <= abs(r2 - U) else r2
    return U


def u_taylor_from_sigma(m: complex, K: int) -> list[complex]:
    """Taylor coefficients of U(z;m) from the sigma coefficients via U^2 - bU - 1 = 0."""
    lam = lambda_of_m(m)
    s = sigma_series_coeffs(lam, K + 1)
    # b(z) = -16 i sigma'(32 i z) - 2 i,  sigma'(r) = sum k s_k r^{k-1}
    b = [(-16j) * (k + 1) * s[k + 1] * (32j) ** k for k in range(K + 1)]
    b[0] -= 2j
    U = [u0_of_m(m)]
    for k in range(1, K + 1):
        acc = sum(b[i] * U[k - i] for i in range(1, k + 1)) - sum(U[i] * U[k - i] for i in range(1, k))
        U.append(acc / (2 * U[0] - b[0]))
    return U


def d8_reference(m: complex, K: int = 60):
    """D8 Maclaurin solution with U(0) = tan(pi(m+1/2)/2)."""
    return d8_series(u0_of_m(m), K)
