"""The acceptance suite: one function per criterion, shared by the test
suite and the `verify` CLI command.

Each check returns (passed, detail).  Tolerances live in DEFAULT_TOL and can
be overridden by key.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

DEFAULT_TOL: dict[str, float] = {
    "origin.gamma_rel": 1e-12,
    "fredholm.series_vs_nystrom": 1e-10,
    "fredholm.d1": 1e-12,
    "fredholm.sigma_form": 1e-8,
    "fredholm.u_gap": 1e-8,
    "trend.min_rate": 0.7,
    "barnes.ratio": 0.05,
    "monodromy.cubic": 1e-10,
    "monodromy.cyclic": 1e-12,
    "monodromy.eigen": 1e-12,
    "hamiltonian.large_x": 1e-10,
    "wronskian.float": 1e-10,
}

M_VALUES = (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(2, 5))


@dataclass(frozen=True)
class Criterion:
    id: int
    group: str
    title: str
    budget: float
    run: Callable[[dict], tuple[bool, str]]


@dataclass(frozen=True)
class CriterionResult:
    id: int
    group: str
    title: str
    passed: bool | None  # None: declared not reproducible
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        status = "DECLARED" if self.passed is None else ("PASS" if self.passed else "FAIL")
        return f"[{status}] {self.id:2d} {self.title}: {self.detail} ({self.seconds:.1f}s / {self.budget:.0f}s)"


def _c1(tol):
    from .umemura import un_zero_backlund, un_zero_gamma, un_zero_product

    worst = 0.0
    for m in M_VALUES:
        for n in range(17):
            b, p = un_zero_backlund(n, m), un_zero_product(n, m)
            if b != p:
                return False, f"Backlund {b} != product {p} at n={n}, m={m}"
            g = un_zero_gamma(n, float(m))
            worst = max(worst, abs(g - float(p)) / abs(float(p)))
    return worst <= tol["origin.gamma_rel"], f"exact equality; Gamma rel err {worst:.1e}"


def _c2(tol):
    from .backlund import rational_un
    from .exact import NonDivisible
    from .umemura import umemura_sequence, un_from_umemura

    for m in M_VALUES:
        try:
            umemura_sequence(m, 20)
        except NonDivisible as exc:
            return False, f"recurrence not divisible at m={m}: {exc}"
    for m in (Fraction(1, 4), Fraction(1, 3)):
        for n in range(13):
            if un_from_umemura(n, m) != rational_un(n, m):
                return False, f"ratio != Backlund iterate at n={n}, m={m}"
    return True, "exact division n<=20 (4 m values); ratio = iterate n<=12 (m=1/4,1/3)"


def _c3(tol):
    from .umemura import phi_closed, umemura_poly

    for m in M_VALUES:
        for n in range(21):
            if umemura_poly(n, m)(Fraction(0)) != phi_closed(n, m + Fraction(1, 2)):
                return False, f"mismatch at n={n}, m={m}"
    return True, "s_n(0;m) = phi_n(m+1/2) exactly, n<=20, 4 m values"


def _c4(tol):
    from .exact import RationalPoly
    from .fredholm import sigma_series_coeffs

    want = [
        None,
        [0, Fraction(-1, 4)],
        [0, Fraction(1, 16), Fraction(-1, 16)],
        [0, Fraction(-1, 128), Fraction(3, 128), Fraction(-2, 128)],
        [0, Fraction(5, 9216), Fraction(-41, 9216), Fraction(72, 9216), Fraction(-36, 9216)],
    ]
    s = sigma_series_coeffs(RationalPoly.x(), 5)
    for k in range(1, 5):
        if s[k] != RationalPoly.from_coeffs(want[k]):
            return False, f"coefficient {k}: {s[k]}"
    return True, "four coefficients equal as polynomials in lambda"


def _c5(tol):
    from .fredholm import FredholmConfig, lambda_of_m, logdet_nystrom, logdet_series

    cfg = FredholmConfig(lambda_of_m(0.25))
    worst = 0.0
    for r in [0.25, 0.5, 1.0, 1j, -1.0, 0.7 - 0.7j]:
        worst = max(worst, abs(logdet_series(r, cfg) - logdet_nystrom(r, cfg)))
    one = FredholmConfig(1.0)
    worst1 = max(abs(logdet_nystrom(r, one) + r / 4) for r in (0.5, 2.0, 5.0))
    ok = worst <= tol["fredholm.series_vs_nystrom"] and worst1 <= tol["fredholm.d1"]
    return ok, f"series vs Nystrom {worst:.1e}; |ln D_1 + r/4| {worst1:.1e}"


def _c6(tol):
    from .fredholm import FredholmConfig, lambda_of_m, sigma_and_prime

    cfg = FredholmConfig(lambda_of_m(0.25))
    worst = max(abs(sigma_and_prime(r, cfg, method="nystrom", need_logdet=False).sigma_form_residual())
                for r in (0.5, 1.0, 2.0, 4.0))
    return worst <= tol["fredholm.sigma_form"], f"max residual {worst:.1e}"


def _c7(tol):
    from .fredholm import u_from_fredholm
    from .series import d8_series, u0_of_m

    U = d8_series(u0_of_m(0.25))
    grid = [0j] + [0.1 * cmath.exp(2j * math.pi * k / 8) for k in range(8)]
    worst = max(abs(u_from_fredholm(z, 0.25) - U(z)) for z in grid)
    return worst <= tol["fredholm.u_gap"], f"max |U_fredholm - U_series| {worst:.1e} on 9 points"


def _c8(tol):
    from .asymptotics import fit_trend
    from .series import confluence_gap, d8_series, u0_of_m

    U = d8_series(u0_of_m(0.25))
    js = [4, 8, 16, 32]
    gaps = [confluence_gap(j, Fraction(1, 4), 0.1, U=U) for j in js]
    ev = fit_trend(js, [g[0] for g in gaps], tol["trend.min_rate"])
    od = fit_trend(js, [g[1] for g in gaps], tol["trend.min_rate"])
    ratio_ok = all(gaps[-1][i] <= gaps[0][i] / 4 for i in (0, 1))
    ok = ev.passed and od.passed and ratio_ok
    return ok, (f"even p={ev.rateEstimate:.2f} gap32={gaps[-1][0]:.2e}; "
                f"odd p={od.rateEstimate:.2f} gap32={gaps[-1][1]:.2e}")


def _c9(tol):
    from .asymptotics import TrendReport, fit_trend, umemura_ratio_trend

    rep: TrendReport = umemura_ratio_trend(Fraction(1, 4), 0.05j, (6, 12, 24))
    rep = fit_trend(rep.indices, rep.values, tol["trend.min_rate"])
    return rep.passed, f"errors {', '.join(f'{v:.2e}' for v in rep.values)}; p={rep.rateEstimate:.2f}"


def _c10(tol):
    from .asymptotics import sn0_trend

    rep = sn0_trend(Fraction(1, 4), (5, 10, 20))
    dec = all(a > b for a, b in zip(rep.values, rep.values[1:]))
    ok = rep.values[-1] <= tol["barnes.ratio"] and dec
    return ok, f"|ratio-1| {', '.join(f'{v:.2e}' for v in rep.values)} at j=5,10,20"


def _c11(tol):
    from .monodromy import (
        MonodromyData,
        cyclic_residuals,
        eigen_residuals,
        random_generic,
        x_coords,
        y_coords,
    )

    rng = np.random.default_rng(20240611)
    cub = cyc = eig = 0.0
    for _ in range(100):
        d = random_generic(rng)
        cub = max(cub, x_coords(d).residual, y_coords(d, 1).residual, y_coords(d, -1).residual)
        cyc = max(cyc, *cyclic_residuals(d))
        eig = max(eig, *eigen_residuals(d))
    m = 0.3
    y = y_coords(MonodromyData.rational(m)).coords
    q = cmath.sqrt(1 + cmath.exp(2j * math.pi * m))
    want = (1j * cmath.exp(1j * math.pi * m) / q, 1j / q, 0)
    rat = min(max(abs(a - s * b) for a, b in zip(y[:2], want[:2])) for s in (1, -1)) + abs(y[2])
    ok = cub <= tol["monodromy.cubic"] and cyc <= tol["monodromy.cyclic"] and eig <= tol["monodromy.eigen"] and rat <= 1e-12
    return ok, f"cubic {cub:.1e}, cyclic {cyc:.1e}, eigen {eig:.1e}, rational {rat:.1e}"


def _c12(tol):
    from .backlund import (
        h_first_identity,
        h_second_identity,
        hamiltonian_hn,
        hamiltonian_large_x,
        momentum_pn,
        rational_un,
    )
    from .exact import RationalFunction, ratfun_eval

    m = Fraction(1, 4)
    for n in range(7):
        if not h_first_identity(n, m).num.is_zero():
            return False, f"first identity fails at n={n}"
        if n >= 1 and not h_second_identity(n, m).num.is_zero():
            return False, f"second identity fails at n={n}"
    worst = 0.0
    for n in range(7):
        u = rational_un(n, m)
        H, _ = hamiltonian_hn(u, n, m)
        v = ratfun_eval(H + u * momentum_pn(u, n, m) / RationalFunction.x(), 1000.0)
        worst = max(worst, abs(v - hamiltonian_large_x(1000.0, n, m)))
    return worst <= tol["hamiltonian.large_x"], f"identities exact n<=6; large-x gap {worst:.1e}"


def _c13(tol):
    from .umemura import umemura_poly, wronskian_2jk_check

    for m in (Fraction(1, 4), Fraction(1, 3), Fraction(0), Fraction(-2, 7)):
        for x in (Fraction(1, 3), Fraction(-2, 5)):
            for n in range(7):
                if wronskian_2jk_check(n, x, m) != 0:
                    return False, f"exact identity fails at n={n}, x={x}, m={m}"
    worst = 0.0
    for n in range(1, 7):
        x = 0.3 + 0.2j
        s = umemura_poly(n, Fraction(1, 4))(x)
        worst = max(worst, abs(wronskian_2jk_check(n, x, Fraction(1, 4))) / abs(s))
    flipped = wronskian_2jk_check(3, Fraction(1, 3), Fraction(1, 4), sign=-1)
    ok = worst <= tol["wronskian.float"]
    return ok, f"exact n<=6 with 2^(n(n+1)/2); float rel {worst:.1e}; opposite sign leaves {abs(complex(flipped)):.1e}"


def _c14(tol):
    return None, ("requires a Riemann-Hilbert solver (out of scope); "
                  "covered by formula-level checks 1, 7, 11 and the leading-term cross-checks")


CRITERIA: list[Criterion] = [
    Criterion(1, "umemura", "origin values three ways", 30, _c1),
    Criterion(2, "umemura", "recurrence divisibility and ratio identity", 60, _c2),
    Criterion(3, "umemura", "origin closed form", 5, _c3),
    Criterion(4, "fredholm", "sigma series coefficients", 1, _c4),
    Criterion(5, "fredholm", "determinant cross-validation", 30, _c5),
    Criterion(6, "fredholm", "sigma-form residual", 30, _c6),
    Criterion(7, "fredholm", "U from the determinant vs series", 60, _c7),
    Criterion(8, "series", "confluence trend", 120, _c8),
    Criterion(9, "asymptotics", "Umemura ratio trend", 120, _c9),
    Criterion(10, "asymptotics", "Barnes-G asymptotics", 10, _c10),
    Criterion(11, "monodromy", "monodromy algebra", 10, _c11),
    Criterion(12, "backlund", "Hamiltonian identities", 30, _c12),
    Criterion(13, "umemura", "Wronskian identity", 60, _c13),
    Criterion(14, "declared", "generic-seed statements", 0, _c14),
]


def run_criteria(only: set[str] | None = None, tol_override: dict[str, float] | None = None,
                 ids: set[int] | None = None) -> list[CriterionResult]:
    tol = dict(DEFAULT_TOL)
    for k, v in (tol_override or {}).items():
        if k == "*":
            for key in tol:
                if key != "trend.min_rate":
                    tol[key] = v
        elif k not in tol:
            raise KeyError(f"unknown tolerance key {k!r}")
        else:
            tol[k] = v
    out = []
    for c in CRITERIA:
        if only and c.group not in only:
            continue
        if ids and c.id not in ids:
            continue
        t = time.perf_counter()
        try:
            passed, detail = c.run(tol)
        except Exception as exc:  # a crash is a failure, reported with its cause
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CriterionResult(c.id, c.group, c.title, passed, detail, time.perf_counter() - t, c.budget))
    return out
