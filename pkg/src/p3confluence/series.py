"""Maclaurin series for the scaled PIII(D6) equation and for PIII(D8).

With x = z/n the rational-family equation becomes

    U'' = U'^2/U - U'/z + (alpha_n U^2 + beta_n)/z + gamma_n U^3 + delta_n/U,

alpha_n = 4 + alpha/n, beta_n = 4 + beta/n, gamma_n = 4/n^2, delta_n = -4/n^2;
D8 is the case (4, 4, 0, 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .backlund import un_value
from .exact import GaussRational, to_complex
from .umemura import un_zero_backlund


class ZeroInitialValue(ValueError):
    """The series needs U(0) != 0."""


@dataclass(frozen=True)
class ScaledParams:
    alphaN: complex
    betaN: complex
    gammaN: complex
    deltaN: complex

    @staticmethod
    def d8() -> "ScaledParams":
        return ScaledParams(4, 4, 0, 0)

    @staticmethod
    def d6(n: int, alpha: complex, beta: complex) -> "ScaledParams":
        return ScaledParams(4 + alpha / n, 4 + beta / n, 4 / n**2, -4 / n**2)


@dataclass(frozen=True)
class SeriesSolution:
    v0: complex
    coeffs: list = field(repr=False)
    params: ScaledParams
    radiusBound: float

    def __call__(self, z: complex) -> complex:
        v = 0j
        for c in reversed(self.coeffs):
            v = v * z + c
        return v

    def derivative(self, z: complex) -> complex:
        v = 0j
        for k in range(len(self.coeffs) - 1, 0, -1):
            v = v * z + k * self.coeffs[k]
        return v

    def second_derivative(self, z: complex) -> complex:
        v = 0j
        for k in range(len(self.coeffs) - 1, 1, -1):
            v = v * z + k * (k - 1) * self.coeffs[k]
        return v

    def residual(self, z: complex) -> complex:
        """z U U'' - z U'^2 + U U' - alpha U^3 - beta U - gamma z U^4 - delta z."""
        p = self.params
        u, d1, d2 = self(z), self.derivative(z), self.second_derivative(z)
        return (
            z * u * d2 - z * d1 * d1 + u * d1
            - p.alphaN * u**3 - p.betaN * u - p.gammaN * z * u**4 - p.deltaN * z
        )


def series_coeffs(v0, params: ScaledParams, K: int) -> list:
    """Coefficients v_0..v_K from the coefficient recurrence.

    Works over any field: complex floats, or Fractions for an exact run.
    """
    if v0 == 0:
        raise ZeroInitialValue("v0 must be nonzero")
    a, b, g, d = params.alphaN, params.betaN, params.gammaN, params.deltaN
    v = [v0]
    sq = [v0 * v0]  # coefficients of U^2, kept one index behind v
    for k in range(K):
        # [U^2]_k needs v_0..v_k, all known now
        if len(sq) <= k:
            sq.append(sum(v[i] * v[k - i] for i in range(k + 1)))
        s1 = sum(i * (k + 1 - 2 * i) * v[i] * v[k + 1 - i] for i in range(1, k + 1))
        s3 = sum(sq[i] * v[k - i] for i in range(k + 1))
        acc = s1 + a * s3 + b * v[k]
        if k >= 1:
            acc += g * sum(sq[i] * sq[k - 1 - i] for i in range(k))
        if k == 1:
            acc += d
        v.append(acc / ((k + 1) ** 2 * v0))
    return v


def d6_series(v0: complex, params: ScaledParams, K: int = 60) -> SeriesSolution:
    if K < 2:
        raise ValueError("K >= 2 required")
    coeffs = series_coeffs(complex(v0), params, K)
    return SeriesSolution(complex(v0), coeffs, params, majorant_radius(2 * abs(v0) + 1))


def d8_series(U0: complex, K: int = 60) -> SeriesSolution:
    return d6_series(U0, ScaledParams.d8(), K)


def u0_of_m(m: complex) -> complex:
    """U(0;m) = tan(pi (m + 1/2) / 2)."""
    import cmath

    return cmath.tan(math.pi * (complex(m) + 0.5) / 2)


# -- majorant ------------------------------------------------------------------

def majorant_coeffs(Upsilon0: float, K: int, scale: float = 1.0) -> list[float]:
    """Upsilon_k * scale^k for the majorant recurrence."""
    U0 = Upsilon0
    y = [U0, 5 * (1 + U0 * U0) * scale]
    y.append((76 * U0**4 + 100 * U0**2 + 26) / (4 * U0**2) * scale**2)
    sq = [U0 * U0, 2 * U0 * y[1]]
    for k in range(2, K):
        sq.append(sum(y[i] * y[k - i] for i in range(k + 1)))
        s1 = sum(y[i] * y[k + 1 - i] for i in range(1, k + 1))
        s3 = sum(sq[i] * y[k - i] for i in range(k + 1))
        s4 = sum(sq[i] * sq[k - 1 - i] for i in range(k))
        y.append((s1 + scale * (5 * s3 + 5 * y[k]) + scale**2 * s4) / U0)
    return y[: K + 1]


def _majorant_F(z: float, U: float, U0: float):
    c = 82 * U0**4 + 125 * U0**2 + 43.5
    F = -3 * U0 * U + U * U + 2 * U0 * U0 - z * (c * z - 5 * U**3 - 5 * U - z * U**4)
    Fu = -3 * U0 + 2 * U - z * (-15 * U * U - 5 - 4 * z * U**3)
    Fz = -(2 * c * z - 5 * U**3 - 5 * U - 2 * z * U**4)
    return F, Fu, Fz


def majorant_branch_point(Upsilon0: float) -> float:
    """First z > 0 where the branch U(0) = Upsilon0 of the majorant equation folds."""
    U0 = float(Upsilon0)
    z, U = 0.0, U0
    dz = 1e-3 / (U0**2 + 1) ** 1.5
    # follow the branch until dU/dz blows up (F_U -> 0)
    while True:
        F, Fu, Fz = _majorant_F(z, U, U0)
        znew = z + dz
        Unew = U - Fz / Fu * dz
        ok = False
        for _ in range(50):
            F, Fu, _ = _majorant_F(znew, Unew, U0)
            if Fu == 0:
                break
            step = F / Fu
            Unew -= step
            if abs(step) < 1e-14 * abs(Unew):
                ok = True
                break
        if ok and Fu < 0 and Unew > U:
            z, U = znew, Unew
            dz *= 1.2
        else:
            dz /= 4
            if dz < 1e-15 * max(z, 1e-300):
                break
    # polish the fold point: F = 0, F_U = 0
    for _ in range(60):
        F, Fu, Fz = _majorant_F(z, U, U0)
        h = 1e-7 * max(abs(U), 1)
        _, Fu2, Fz2 = _majorant_F(z, U + h, U0)
        Fuu = (Fu2 - Fu) / h
        hz = 1e-7 * max(z, 1e-12)
        _, Fu3, _ = _majorant_F(z + hz, U, U0)
        Fuz = (Fu3 - Fu) / hz
        det = Fz * Fuu - Fu * Fuz
        if det == 0:
            break
        # solve [[Fz, Fu], [Fuz, Fuu]] [dz, dU] = -[F, Fu]
        dzn = (-F * Fuu + Fu * Fu) / det
        dUn = (-Fz * Fu + Fuz * F) / det
        z += dzn
        U += dUn
        if abs(dzn) < 1e-15 * z:
            break
    return z


def majorant_radius(Upsilon0: float) -> float:
    """Certified lower bound on the series radius: half the majorant fold point."""
    if Upsilon0 <= 0:
        raise ValueError("Upsilon0 must be positive")
    return 0.5 * majorant_branch_point(Upsilon0)


def empirical_majorant_radius(Upsilon0: float, K: int = 200) -> float:
    """Root-test estimate |Upsilon_K|^{-1/K} computed in rescaled form."""
    s = majorant_branch_point(Upsilon0)
    y = majorant_coeffs(Upsilon0, K, scale=s)
    return s / (y[K] ** (1.0 / K))


# -- confluence ----------------------------------------------------------------

def _exact_point(z: complex):
    z = complex(z)
    re = Fraction(z.real).limit_denominator(10**12)
    im = Fraction(z.imag).limit_denominator(10**12)
    return re if im == 0 else GaussRational(re, im)


def confluence_gap(j: int, m, z: complex, K: int = 60, U: SeriesSolution | None = None) -> tuple[float, float]:
    """(|u_{2j}(z/2j) - U(z)|, |u_{2j+1}(z/(2j+1)) + 1/U(z)|) at fixed m.

    u_n is evaluated exactly (pointwise Backlund iteration at a rational point);
    U comes from the D8 Maclaurin series with U(0) = tan(pi(m+1/2)/2).
    """
    m = Fraction(m)
    if U is None:
        U = d8_series(u0_of_m(float(m)), K)
    zz = _exact_point(z)
    Uz = U(complex(z))
    if zz == 0:
        ue = to_complex(un_zero_backlund(2 * j, m))
        uo = to_complex(un_zero_backlund(2 * j + 1, m))
    else:
        ue = to_complex(un_value(2 * j, m, zz / (2 * j))[0])
        uo = to_complex(un_value(2 * j + 1, m, zz / (2 * j + 1))[0])
    return abs(ue - Uz), abs(uo + 1 / Uz)
