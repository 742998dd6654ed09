"""Command-line entry point: `p3confluence <command> [options]`.

Commands write JSON (schemas in docs/) or CSV to --out, or to stdout.
Exit codes: 0 pass, 1 usage, 2 identity falsified, 3 numerical budget exceeded.
Set P3C_THREADS to evaluate independent grid points and draws concurrently;
rows are always assembled in index order, so output does not depend on it.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# -- parsing ----------------------------------------------------------------------

def parse_number(text: str) -> Fraction | complex:
    """'p/q' or a decimal gives a Fraction; 'a+bi' (or 'bi') gives a complex."""
    s = text.strip().replace(" ", "")
    if not s:
        raise UsageError("empty number")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        z = complex(s.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse number {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise UsageError(f"non-finite number {text!r}")
    return z


def parse_grid(text: str) -> list[complex]:
    """'start:stop:count' (endpoints may be imaginary, e.g. '0:0.1i:5') or one value."""
    parts = text.split(":")
    if len(parts) == 1:
        return [complex(parse_number(parts[0]))]
    if len(parts) != 3:
        raise UsageError(f"grid {text!r} is not start:stop:count")
    a, b = complex(parse_number(parts[0])), complex(parse_number(parts[1]))
    try:
        n = int(parts[2])
    except ValueError:
        raise UsageError(f"grid count {parts[2]!r} is not an integer") from None
    if n < 1:
        raise UsageError("grid count must be >= 1")
    if n == 1:
        return [a]
    return [a + (b - a) * k / (n - 1) for k in range(n)]


def parse_int_list(text: str) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None
    if not out:
        raise UsageError("empty integer list")
    return out


def parse_tol(items: Sequence[str]) -> dict[str, float]:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects KEY=VALUE, got {item!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"bad tolerance value in {item!r}") from None
    return out


# -- serialization ----------------------------------------------------------------

def jnum(v):
    """JSON form: Fraction -> 'p/q', complex -> {'re','im'}, float kept."""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        return {"re": _jfloat(v.real), "im": _jfloat(v.imag)}
    if isinstance(v, float):
        return _jfloat(v)
    return v


def _jfloat(x: float):
    return x if math.isfinite(x) else None


def cnum(v) -> str:
    """CSV cell: exact rationals as 'p/q', floats by repr, complex as 'a+bi'."""
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, complex):
        if v.imag == 0:
            return repr(v.real)
        sign = "+" if math.copysign(1.0, v.imag) > 0 else "-"
        return f"{v.real!r}{sign}{abs(v.imag)!r}i"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


def dump_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([cnum(v) for v in r])
    return buf.getvalue()


# -- configuration -----------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    m: Fraction | complex | None = None
    nMax: int = 8
    zGrid: list[complex] = field(default_factory=list)
    js: list[int] = field(default_factory=list)
    seriesOrder: int = 60
    quadOrder: int = 64
    fmt: str = "json"
    out: str | None = None
    seed: int = 0
    draws: int = 100
    only: set[str] = field(default_factory=set)
    tol: dict[str, float] = field(default_factory=dict)
    lam: complex | None = None


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("P3C_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: Sequence) -> list:
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None or cfg.out == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="") as f:
            f.write(text)


def _rational_m(cfg: RunConfig) -> Fraction:
    if not isinstance(cfg.m, Fraction):
        raise UsageError("this command needs a rational m ('p/q')")
    return cfg.m


# -- commands --------------------------------------------------------------------

def cmd_umemura(cfg: RunConfig) -> int:
    from .umemura import phi_closed, umemura_sequence, un_zero_product

    m = _rational_m(cfg)
    if cfg.nMax < 0:
        raise UsageError("--n-max must be >= 0")
    seq = umemura_sequence(m, cfg.nMax)
    polys = [{"n": n, "coeffs": [str(c) for c in seq.s(n).coeffs]} for n in range(-1, cfg.nMax + 1)]
    origin = []
    for n in range(cfg.nMax + 1):
        s0 = seq.s(n)(Fraction(0))
        if s0 != phi_closed(n, m + Fraction(1, 2)):
            raise ArithmeticError(f"s_{n}(0) disagrees with the closed form")
        origin.append({"n": n, "s_n0": str(s0), "u_n0": str(un_zero_product(n, m))})
    if cfg.fmt == "json":
        _emit(cfg, dump_json({"command": "umemura", "m": str(m), "nMax": cfg.nMax, "polys": polys, "origin": origin}))
    else:
        rows = []
        for p in polys:
            o = origin[p["n"]] if p["n"] >= 0 else {"s_n0": "1", "u_n0": ""}
            rows.append([p["n"], len(p["coeffs"]) - 1, o["s_n0"], o["u_n0"], " ".join(p["coeffs"])])
        _emit(cfg, dump_csv(["n", "degree", "s_n0", "u_n0", "coeffs"], rows))
    return EXIT_OK


def cmd_confluence(cfg: RunConfig) -> int:
    from .asymptotics import fit_trend
    from .exact import PoleHit
    from .series import confluence_gap, d8_series, u0_of_m

    m = _rational_m(cfg)
    js = cfg.js or [4, 8, 16, 32]
    if min(js) < 1:
        raise UsageError("--j values must be >= 1")
    zs = cfg.zGrid or [0.1 + 0j]
    U = d8_series(u0_of_m(float(m)), cfg.seriesOrder)
    tasks = [(j, z) for z in zs for j in js]

    def one(task):
        j, z = task
        try:
            ge, go = confluence_gap(j, m, z, K=cfg.seriesOrder, U=U)
            return j, z, ge, go, ""
        except PoleHit:
            return j, z, None, None, "PoleHit"

    rows = _pmap(one, tasks)
    trends = []
    for z in zs:
        sel = [r for r in rows if r[1] == z and not r[4]]
        te = fit_trend([r[0] for r in sel], [r[2] for r in sel], last=len(sel))
        to = fit_trend([r[0] for r in sel], [r[3] for r in sel], last=len(sel))
        trends.append({"z": jnum(complex(z)), "rate_even": _jfloat(te.rateEstimate), "rate_odd": _jfloat(to.rateEstimate)})
    if cfg.fmt == "json":
        doc = {
            "command": "confluence", "m": str(m), "seriesOrder": cfg.seriesOrder,
            "rows": [{"j": j, "z": jnum(complex(z)), "gap_even": jnum(ge), "gap_odd": jnum(go), "flag": fl}
                     for j, z, ge, go, fl in rows],
            "trends": trends,
        }
        _emit(cfg, dump_json(doc))
    else:
        _emit(cfg, dump_csv(["j", "z_re", "z_im", "gap_even", "gap_odd", "flag"],
                            [[j, complex(z).real, complex(z).imag, ge, go, fl] for j, z, ge, go, fl in rows]))
    return EXIT_OK


def cmd_fredholm(cfg: RunConfig) -> int:
    from .fredholm import FredholmConfig, lambda_of_m, logdet_nystrom, logdet_series, sigma_and_prime

    if cfg.lam is not None:
        lam = cfg.lam
    elif cfg.m is not None:
        lam = lambda_of_m(complex(cfg.m))
    else:
        raise UsageError("fredholm needs --m or --lam")
    fc = FredholmConfig(lam, quadOrder=cfg.quadOrder)
    rs = cfg.zGrid or [complex(k) / 2 for k in range(9)]

    def one(r):
        r = complex(r)
        if r == 0:
            return r, 0j, 0j, 0j, 0.0
        ls = logdet_series(r, fc) if abs(r) <= fc.seriesBudget else None
        ln = logdet_nystrom(r, fc)
        ev = sigma_and_prime(r, fc, need_logdet=False)
        return r, ls, ln, ev.sigma, abs(ev.sigma_form_residual())

    rows = _pmap(one, rs)
    if cfg.fmt == "json":
        doc = {
            "command": "fredholm", "lambda": jnum(complex(lam)), "quadOrder": cfg.quadOrder,
            "rows": [{"r": jnum(r), "logDet_series": None if ls is None else jnum(ls), "logDet_nystrom": jnum(ln),
                      "sigma": jnum(sg), "sigma_form_residual": jnum(res)} for r, ls, ln, sg, res in rows],
        }
        _emit(cfg, dump_json(doc))
    else:
        _emit(cfg, dump_csv(["r", "logDet_series", "logDet_nystrom", "sigma", "sigma_form_residual"], rows))
    return EXIT_OK


def cmd_monodromy(cfg: RunConfig) -> int:
    import cmath

    import numpy as np

    from .monodromy import (
        MonodromyData,
        cyclic_residuals,
        eigen_residuals,
        random_generic_counted,
        x_coords,
        y_coords,
    )

    if cfg.draws < 0:
        raise UsageError("--draws must be >= 0")
    rng = np.random.default_rng(cfg.seed)
    draws, rejected = [], 0
    for _ in range(cfg.draws):
        d, k = random_generic_counted(rng)
        draws.append(d)
        rejected += k

    def one(d):
        cub6 = x_coords(d).residual
        cub8 = max(y_coords(d, 1).residual, y_coords(d, -1).residual)
        return d, cub6, cub8, max(cyclic_residuals(d)), max(eigen_residuals(d))

    rows = _pmap(one, draws)
    mr = complex(cfg.m) if cfg.m is not None else 0.3 + 0j
    yp = y_coords(MonodromyData.rational(mr))
    q = cmath.sqrt(1 + cmath.exp(2j * math.pi * mr))
    want = (1j * cmath.exp(1j * math.pi * mr) / q, 1j / q, 0j)
    gap = min(max(abs(a - s * b) for a, b in zip(yp.coords[:2], want[:2])) for s in (1, -1))
    rational = {"m": jnum(mr), "y": [jnum(complex(v)) for v in yp.coords], "cubic_residual": yp.residual,
                "closed_form_gap": gap + abs(yp.coords[2])}
    if cfg.fmt == "json":
        doc = {
            "command": "monodromy", "seed": cfg.seed, "draws": cfg.draws, "rejected": rejected,
            "rows": [{"i": i, "theta0": jnum(d.theta0), "thetaInf": jnum(d.thetaInf), "mu": jnum(d.mu),
                      "eta": jnum(d.eta), "cubic_d6": c6, "cubic_d8": c8, "cyclic": cy, "eigen": ei}
                     for i, (d, c6, c8, cy, ei) in enumerate(rows)],
            "rational": rational,
        }
        _emit(cfg, dump_json(doc))
    else:
        body = [[i, d.theta0, d.thetaInf, d.mu, d.eta, c6, c8, cy, ei] for i, (d, c6, c8, cy, ei) in enumerate(rows)]
        text = dump_csv(["i", "theta0", "thetaInf", "mu", "eta", "cubic_d6", "cubic_d8", "cyclic", "eigen"], body)
        text += f"# rejected={rejected} rational_y3={cnum(complex(yp.coords[2]))} rational_gap={cnum(rational['closed_form_gap'])}\n"
        _emit(cfg, text)
    return EXIT_OK


_BUDGET_ERRORS = ("TruncationBudgetExceeded", "BranchTrackingFailure", "QuadratureDivergence")


def cmd_verify(cfg: RunConfig) -> int:
    from .acceptance import CRITERIA, run_criteria

    groups = {c.group for c in CRITERIA}
    bad = cfg.only - groups
    if bad:
        raise UsageError(f"unknown group(s) {sorted(bad)}; choose from {sorted(groups)}")
    try:
        results = run_criteria(only=cfg.only or None, tol_override=cfg.tol)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    lines = [r.line() for r in results]
    if cfg.fmt == "json":
        doc = {"command": "verify", "results": [
            {"id": r.id, "group": r.group, "title": r.title,
             "status": "declared" if r.passed is None else ("pass" if r.passed else "fail"),
             "detail": r.detail, "seconds": round(r.seconds, 3), "budget": r.budget} for r in results]}
        _emit(cfg, dump_json(doc))
    else:
        _emit(cfg, "\n".join(lines) + "\n")
    failed = [r for r in results if r.passed is False]
    if not failed:
        return EXIT_OK
    if all(r.detail.startswith(_BUDGET_ERRORS) for r in failed):
        return EXIT_BUDGET
    return EXIT_FALSIFIED


COMMANDS = {
    "umemura": cmd_umemura,
    "confluence": cmd_confluence,
    "fredholm": cmd_fredholm,
    "monodromy": cmd_monodromy,
    "verify": cmd_verify,
}


# -- argument parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="p3confluence", description="Rational PIII solutions, D8 confluence and Bessel determinants.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt_default="json"):
        sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default=fmt_default)
        sp.add_argument("--out", default=None, help="output file (default stdout)")

    sp = sub.add_parser("umemura", help="Umemura polynomials and origin values")
    sp.add_argument("--m", required=True)
    sp.add_argument("--n-max", type=int, default=8)
    common(sp)

    sp = sub.add_parser("confluence", help="gaps between u_n(z/n) and the D8 limit")
    sp.add_argument("--m", required=True)
    sp.add_argument("--z", default="0.1", help="value or start:stop:count")
    sp.add_argument("--j", default="4,8,16,32")
    sp.add_argument("--series-order", type=int, default=60)
    common(sp)

    sp = sub.add_parser("fredholm", help="Bessel-kernel determinant table")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--m")
    g.add_argument("--lam")
    sp.add_argument("--r", default="0:4:9", help="value or start:stop:count")
    sp.add_argument("--quad-order", type=int, default=64)
    common(sp)

    sp = sub.add_parser("monodromy", help="residuals of the monodromy algebra on random data")
    sp.add_argument("--draws", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--m", default=None, help="m for the rational block (default 3/10)")
    common(sp)

    sp = sub.add_parser("verify", help="run the acceptance suite")
    sp.add_argument("--only", action="append", default=[], help="group name; repeatable or comma separated")
    sp.add_argument("--tol", action="append", default=[], help="KEY=VALUE; KEY '*' sets every tolerance")
    common(sp, fmt_default="csv")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, fmt=ns.fmt, out=ns.out)
    if getattr(ns, "m", None) is not None:
        cfg.m = parse_number(ns.m)
    if ns.command == "umemura":
        cfg.nMax = ns.n_max
    elif ns.command == "confluence":
        cfg.zGrid = parse_grid(ns.z)
        cfg.js = parse_int_list(ns.j)
        cfg.seriesOrder = ns.series_order
        if cfg.seriesOrder < 4:
            raise UsageError("--series-order must be >= 4")
    elif ns.command == "fredholm":
        if ns.lam is not None:
            cfg.lam = complex(parse_number(ns.lam))
        cfg.zGrid = parse_grid(ns.r)
        cfg.quadOrder = ns.quad_order
        if cfg.quadOrder < 16:
            raise UsageError("--quad-order must be >= 16")
    elif ns.command == "monodromy":
        cfg.draws, cfg.seed = ns.draws, ns.seed
    elif ns.command == "verify":
        cfg.only = {g.strip() for item in ns.only for g in item.split(",") if g.strip()}
        cfg.tol = parse_tol(ns.tol)
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    from .exact import NonDivisible
    from .fredholm import BranchTrackingFailure, DegenerateLambda, QuadratureDivergence, TruncationBudgetExceeded
    from .umemura import HalfIntegerM

    try:
        cfg = config_from_args(build_parser().parse_args(argv))
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonDivisible, HalfIntegerM, ArithmeticError) as exc:
        if isinstance(exc, (TruncationBudgetExceeded, BranchTrackingFailure, QuadratureDivergence)):
            print(f"budget exceeded: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        print(f"identity falsified: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FALSIFIED
    except DegenerateLambda as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
