"""Monodromy parameter algebra for PIII(D6) and its D8 limit.

Parameters (Theta0, ThetaInf, mu, eta) determine e0 = exp(i pi Theta0/2),
eInf = exp(i pi ThetaInf/2), e1 = exp(i pi mu), e2 = exp(i pi eta).  From these
we build the Stokes multipliers, the normalized eigenvector matrices, both
connection matrices, the points (x1, x2, x3) on the D6 monodromy cubic and the
points (y1, y2, y3) on the D8 cubic y1 y2 y3 + y1^2 + y2^2 + 1 = 0.

Matrices are 2x2 complex numpy arrays.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

GENERIC_TOL = 1e-12

Matrix2 = np.ndarray


class NonGeneric(ValueError):
    """The monodromy parameters violate one of the genericity conditions."""


def _fold(v: complex) -> complex:
    """Shift by an integer so that -1/2 < Re v <= 1/2."""
    v = complex(v)
    k = math.ceil(v.real - 0.5)
    return v - k


@dataclass(frozen=True)
class MonodromyData:
    theta0: complex
    thetaInf: complex
    mu: complex
    eta: complex

    def __post_init__(self):
        for name in ("theta0", "thetaInf", "mu", "eta"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        for name in ("mu", "eta"):
            re = getattr(self, name).real
            if not (-0.5 < re <= 0.5 + 1e-15):
                raise ValueError(f"Re {name} = {re} outside (-1/2, 1/2]")

    @staticmethod
    def from_alpha_beta(alpha, beta, mu, eta) -> "MonodromyData":
        return MonodromyData(complex(alpha) / 4, 1 - complex(beta) / 4, mu, eta)

    @staticmethod
    def from_e2(theta0, thetaInf, mu, e2: complex) -> "MonodromyData":
        """Build from e2 directly; e2 -> -e2 is a symmetry so eta is folded."""
        if abs(e2) < GENERIC_TOL:
            raise NonGeneric("e2 = 0")
        eta = _fold(cmath.log(e2) / (1j * math.pi))
        return MonodromyData(theta0, thetaInf, mu, eta)

    @staticmethod
    def rational(m) -> "MonodromyData":
        """Data of the rational seed u_0(x; m): alpha = -beta = 4m, e1^2 = i."""
        m = complex(m)
        q = cmath.exp(1j * math.pi * m)
        e2 = cmath.sqrt(cmath.exp(-2j * math.pi * m) * (1 - 1j * q) / (1 + 1j * q))
        return MonodromyData.from_e2(m, 1 + m, 0.25, e2)

    @property
    def alpha(self) -> complex:
        return 4 * self.theta0

    @property
    def beta(self) -> complex:
        return 4 - 4 * self.thetaInf

    @property
    def e0(self) -> complex:
        return cmath.exp(0.5j * math.pi * self.theta0)

    @property
    def eInf(self) -> complex:
        return cmath.exp(0.5j * math.pi * self.thetaInf)

    @property
    def e1(self) -> complex:
        return cmath.exp(1j * math.pi * self.mu)

    @property
    def e2(self) -> complex:
        return cmath.exp(1j * math.pi * self.eta)

    def genericity_defects(self) -> dict[str, float]:
        """Distance of each excluded equality from holding."""
        e1s, e0s, eis = self.e1**2, self.e0**2, self.eInf**2
        return {
            "e1^4 = 1": abs(e1s * e1s - 1),
            "e1 e2 = 0": abs(self.e1 * self.e2),
            "e1^2 = eInf^2": abs(e1s - eis),
            "e1^2 = eInf^-2": abs(e1s - 1 / eis),
            "e1^2 = e0^2": abs(e1s - e0s),
            "e1^2 = e0^-2": abs(e1s - 1 / e0s),
        }

    def is_generic(self, tol: float = GENERIC_TOL) -> bool:
        return all(v > tol for v in self.genericity_defects().values())

    def check_generic(self, tol: float = GENERIC_TOL) -> None:
        bad = [k for k, v in self.genericity_defects().items() if v <= tol]
        if bad:
            raise NonGeneric("violated: " + ", ".join(bad))


def random_generic_counted(rng: np.random.Generator, margin: float = 1e-3) -> tuple[MonodromyData, int]:
    """Uniform draw in the strips, rejection-sampled for genericity; also returns the rejection count."""
    rejected = 0
    while True:
        mu = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        eta = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        t0 = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        ti = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        d = MonodromyData(t0, ti, mu, eta)
        if all(v > margin for v in d.genericity_defects().values()):
            return d, rejected
        rejected += 1


def random_generic(rng: np.random.Generator) -> MonodromyData:
    return random_generic_counted(rng)[0]


# -- matrix helpers ---------------------------------------------------------

def mat(a, b, c, d) -> Matrix2:
    return np.array([[a, b], [c, d]], dtype=complex)


def diag_pow(e: complex, k: float = 1) -> Matrix2:
    """e^(k sigma3)."""
    return mat(e**k, 0, 0, e ** (-k))


def det2(A: Matrix2) -> complex:
    return complex(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])


def inv2(A: Matrix2) -> Matrix2:
    d = det2(A)
    return mat(A[1, 1], -A[0, 1], -A[1, 0], A[0, 0]) / d


def dist_identity(A: Matrix2) -> float:
    return float(np.max(np.abs(A - np.eye(2))))


def _norm(A: Matrix2) -> float:
    return float(np.max(np.abs(A)))


def _chain(*factors: Matrix2) -> tuple[Matrix2, float]:
    """Product of the factors and the product of their max-entry norms, the
    natural scale of roundoff in the product."""
    out = np.eye(2, dtype=complex)
    scale = 1.0
    for f in factors:
        out = out @ f
        scale *= _norm(f)
    return out, scale


# -- Stokes, eigenvector and connection matrices -----------------------------

def stokes_multipliers(d: MonodromyData) -> tuple[complex, complex, complex, complex]:
    d.check_generic()
    e1s, e0s, eis = d.e1**2, d.e0**2, d.eInf**2
    s1i = (eis - e1s) / (e1s * eis**2)
    s2i = 1 - e1s * eis
    s10 = (e1s - e0s) / e1s
    s20 = e1s * e0s - 1
    return s1i, s2i, s10, s20


def stokes_matrices(d: MonodromyData) -> tuple[Matrix2, Matrix2, Matrix2, Matrix2]:
    """(S1Inf, S2Inf, S10, S20): upper, lower, upper, lower unipotent."""
    s1i, s2i, s10, s20 = stokes_multipliers(d)
    return mat(1, s1i, 0, 1), mat(1, 0, s2i, 1), mat(1, s10, 0, 1), mat(1, 0, s20, 1)


def trace_identity_residuals(d: MonodromyData) -> tuple[float, float]:
    """Residuals of e1^2 + e1^-2 against the infinity- and zero-side traces."""
    s1i, s2i, s10, s20 = stokes_multipliers(d)
    e1s, e0s, eis = d.e1**2, d.e0**2, d.eInf**2
    lhs = e1s + 1 / e1s
    return (abs(lhs - (eis + 1 / eis + s1i * s2i * eis)),
            abs(lhs - (e0s + 1 / e0s + s10 * s20 / e0s)))


def eigenvector_matrices(d: MonodromyData) -> tuple[Matrix2, Matrix2]:
    d.check_generic()
    e1s, e0s, eis = d.e1**2, d.e0**2, d.eInf**2
    q = e1s * e1s - 1
    Einf = mat(e1s * (e1s - eis) / q, -1 / (e1s * eis),
               e1s * eis * (e1s * eis - 1) / q, 1)
    E0 = mat(e1s * (e0s * e1s - 1) / (e0s * q), (e1s - e0s) / (e1s * (e0s * e1s - 1)),
             e1s * (1 - e0s * e1s) / (e0s * q), 1)
    return Einf, E0


def monodromy_products(d: MonodromyData) -> tuple[Matrix2, Matrix2]:
    """S1^-1 e^(-+2 sigma3) S2^-1 at infinity and at zero."""
    S1i, S2i, S10, S20 = stokes_matrices(d)
    Minf = inv2(S1i) @ diag_pow(d.eInf, -2) @ inv2(S2i)
    M0 = inv2(S10) @ diag_pow(d.e0, 2) @ inv2(S20)
    return Minf, M0


def eigen_residuals(d: MonodromyData) -> tuple[float, float]:
    """Relative residuals of M E = E e1^(2 sigma3) at infinity and zero."""
    Minf, M0 = monodromy_products(d)
    Einf, E0 = eigenvector_matrices(d)
    L = diag_pow(d.e1, 2)
    return (_norm(Minf @ Einf - Einf @ L) / (_norm(Minf) * _norm(Einf)),
            _norm(M0 @ E0 - E0 @ L) / (_norm(M0) * _norm(E0)))


def connection_matrices(d: MonodromyData) -> tuple[Matrix2, Matrix2]:
    """(C-, C+) with C- = Einf e2^sigma3 E0^-1 and C+ from the second cyclic
    relation."""
    Einf, E0 = eigenvector_matrices(d)
    _, S2i, _, S20 = stokes_matrices(d)
    Cm = Einf @ diag_pow(d.e2) @ inv2(E0)
    Cp = diag_pow(d.eInf, -2) @ inv2(S2i) @ Cm @ S20 @ diag_pow(d.e0, -2)
    return Cm, Cp


def cplus_alternative(d: MonodromyData) -> Matrix2:
    """C+ = S1Inf C- S10^-1, the second representation."""
    Cm, _ = connection_matrices(d)
    S1i, _, S10, _ = stokes_matrices(d)
    return S1i @ Cm @ inv2(S10)


def cyclic_residuals(d: MonodromyData) -> tuple[float, float]:
    """Distance from I of the cyclic products about lambda = +i and -i,
    divided by the product of the factor norms."""
    Cm, Cp = connection_matrices(d)
    S1i, S2i, S10, S20 = stokes_matrices(d)
    plus, sp = _chain(inv2(Cm), inv2(S1i), Cp, S10)
    minus, sm = _chain(S2i, diag_pow(d.eInf, 2), Cp, diag_pow(d.e0, 2), inv2(S20), inv2(Cm))
    return dist_identity(plus) / sp, dist_identity(minus) / sm


# -- cubic surfaces ------------------------------------------------------------

@dataclass(frozen=True)
class CubicPoint:
    kind: Literal["D6", "D8"]
    coords: tuple[complex, complex, complex]
    residual: float


def _d6_terms(x, e0: complex, eInf: complex) -> list[complex]:
    x1, x2, x3 = x
    a = 1 / e0**2
    b = eInf**2
    return [x1 * x2 * x3, x1 * x1, x2 * x2, x2 * (a + b), x1 * (1 + a * b), a * b]


def _d8_terms(y) -> list[complex]:
    y1, y2, y3 = y
    return [y1 * y2 * y3, y1 * y1, y2 * y2, 1]


def _relative(terms: list[complex]) -> float:
    scale = max(abs(t) for t in terms)
    return abs(sum(terms)) / max(scale, 1e-300)


def d6_cubic(x, e0: complex, eInf: complex) -> complex:
    return sum(_d6_terms(x, e0, eInf))


def d6_cubic_alpha_beta(x, alpha, beta) -> complex:
    """The cubic written with exp(-i pi alpha/4), exp(-i pi beta/4)."""
    x1, x2, x3 = x
    ea = cmath.exp(-0.25j * math.pi * alpha)
    eb = cmath.exp(-0.25j * math.pi * beta)
    eab = cmath.exp(-0.25j * math.pi * (alpha + beta))
    return x1 * x2 * x3 + x1**2 + x2**2 + x2 * (ea - eb) + x1 * (1 - eab) - eab


def d6_gradient(x, e0: complex, eInf: complex) -> tuple[complex, complex, complex]:
    x1, x2, x3 = x
    a, b = 1 / e0**2, eInf**2
    return (x2 * x3 + 2 * x1 + 1 + a * b, x1 * x3 + 2 * x2 + a + b, x1 * x2)


def d8_cubic(y) -> complex:
    return sum(_d8_terms(y))


def d6_point(x, e0, eInf) -> CubicPoint:
    x = tuple(complex(v) for v in x)
    return CubicPoint("D6", x, _relative(_d6_terms(x, e0, eInf)))


def d8_point(y) -> CubicPoint:
    y = tuple(complex(v) for v in y)
    return CubicPoint("D8", y, _relative(_d8_terms(y)))


def x_coords(d: MonodromyData) -> CubicPoint:
    d.check_generic()
    e0s, eis, e1s, e2s = d.e0**2, d.eInf**2, d.e1**2, d.e2**2
    den = e0s**2 * e2s * eis * (1 - e0s * e1s) * (e1s * e1s - 1) ** 2
    x1 = (e1s * (e0s * e2s * eis * (e1s * eis - 1) + e0s * e1s - 1)
          * ((e0s * e1s - 1) ** 2 + e0s * e2s * eis * (e0s - e1s) * (eis - e1s))) / den
    x2 = ((e0s * e2s * e1s * eis * (e1s - eis) + 1 - e0s * e1s)
          * ((e0s * e1s - 1) ** 2 + e0s * e1s * e2s * eis * (e0s - e1s) * (e1s * eis - 1))) / den
    x3 = e1s + 1 / e1s
    return d6_point((x1, x2, x3), d.e0, d.eInf)


def y_coords(d: MonodromyData, rootChoice: int = 1) -> CubicPoint:
    """rootChoice = +1 takes the principal square root, -1 its negative."""
    if rootChoice not in (1, -1):
        raise ValueError("rootChoice must be +1 or -1")
    d.check_generic()
    e0, ei, e1, e2 = d.e0, d.eInf, d.e1, d.e2
    e0s, eis, e1s = e0 * e0, ei * ei, e1 * e1
    root = rootChoice * cmath.sqrt((eis - e1s) / (1 - e0s * e1s))
    common = e0 * e2 * ei * (eis - e1s) * (e1s * e1s - 1)
    y1 = 1j * root * (1 - e0s * e1s + e0s * e1s**3 * e2**2 * eis * (e1s - eis)) / (e1 * common)
    y2 = 1j * root * e1 * (1 - e0s * e1s + e0s * e1s * e2**2 * eis * (e1s - eis)) / common
    y3 = -e1s - 1 / e1s
    return d8_point((y1, y2, y3))


def reciprocal_e1(d: MonodromyData, rootChoice: int = 1) -> MonodromyData:
    """The equivalent data with e1 -> 1/e1 and the matching e2."""
    e0s, eis, e1s = d.e0**2, d.eInf**2, d.e1**2
    root = rootChoice * cmath.sqrt((e1s - e0s) * (1 - e0s * e1s) / ((e1s - eis) * (1 - e1s * eis)))
    e2t = root / (d.e2 * e0s * eis)
    return MonodromyData.from_e2(d.theta0, d.thetaInf, _fold(-d.mu), e2t)


# -- singular points, Schlesinger map, D8 limit ------------------------------

def all_singular_points(d: MonodromyData, tol: float = GENERIC_TOL) -> list[CubicPoint]:
    e0s, eis = d.e0**2, d.eInf**2
    x3 = e0s + 1 / e0s
    out = []
    if abs(e0s - eis) <= tol:
        out.append(d6_point((-1, 0, x3), d.e0, d.eInf))
    if abs(1 / e0s - eis) <= tol:
        out.append(d6_point((0, -1 / e0s, x3), d.e0, d.eInf))
    for p in out:
        g = d6_gradient(p.coords, d.e0, d.eInf)
        assert max(abs(v) for v in g) <= 1e-10, "singular point fails gradient test"
    return out


def singular_points(d: MonodromyData, tol: float = GENERIC_TOL) -> CubicPoint | None:
    """The singular point of the D6 cubic, or None when it is smooth.

    When e0^4 = 1 and e0^2 = eInf^2 both candidates are singular; the point
    (-1, 0, x3) is returned first; see all_singular_points for both."""
    pts = all_singular_points(d, tol)
    return pts[0] if pts else None


def schlesinger_update(d: MonodromyData, n: int) -> MonodromyData:
    """Monodromy data of the n-th Backlund iterate."""
    if n % 2 == 0:
        mu = d.mu
    else:
        # Re mu below roundoff counts as 0 (eps = -1), else mu - 1/2 could round onto the open edge
        eps = 1 if d.mu.real > 1e-15 else -1
        mu = d.mu - eps / 2
    return replace(d, theta0=d.theta0 + n, thetaInf=d.thetaInf - n, mu=mu)


def limiting_d8_data(d: MonodromyData, parity: Literal["even", "odd"],
                     rootChoice: int = 1) -> tuple[complex, Matrix2]:
    """Stokes multiplier t and connection matrix of the D8 limit along even or
    odd iterates."""
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    dn = schlesinger_update(d, 0 if parity == "even" else 1)
    dn.check_generic()
    e0, ei, e1, e2 = dn.e0, dn.eInf, dn.e1, dn.e2
    e1s = e1 * e1
    t = -(e1s + 1 / e1s)
    assert abs(t + 2 * cmath.cos(2 * math.pi * dn.mu)) <= 1e-10 * max(1.0, abs(t))
    root = rootChoice * cmath.sqrt((1 - e0**2 * e1s) / (ei**2 - e1s))
    k = e0 * e2 * ei
    V = mat(0, -(k / 1j) / root, 1j * root / k, 0)
    w = cmath.exp(2j * math.pi * dn.mu)
    p = cmath.exp(1j * math.pi * dn.mu)
    A = mat(1, w, -w, -1)
    B = mat(p, p, -p**3, -1 / p)
    C = A @ V @ inv2(B)
    scale = max(1.0, float(np.max(np.abs(C))))
    n1, n2, n3, n4 = C[0, 0], C[0, 1], C[1, 0], C[1, 1]
    assert abs(det2(C) - 1) <= 1e-10 * scale**2, "limiting connection matrix not unimodular"
    assert abs(n1 + n4) <= 1e-10 * scale and abs(n3 - (n2 - n4 * t)) <= 1e-10 * scale * max(1, abs(t))
    return t, C


def y_from_connection(t: complex, C: Matrix2) -> CubicPoint:
    return d8_point((C[1, 0], C[1, 1], t))


def cplus_two_way_residual(d: MonodromyData) -> float:
    """Difference of the two C+ representations over their roundoff scale."""
    Einf, E0 = eigenvector_matrices(d)
    S1i, S2i, S10, S20 = stokes_matrices(d)
    core = (Einf, diag_pow(d.e2), inv2(E0))
    a, sa = _chain(diag_pow(d.eInf, -2), inv2(S2i), *core, S20, diag_pow(d.e0, -2))
    b, sb = _chain(S1i, *core, inv2(S10))
    return _norm(a - b) / max(sa, sb)
