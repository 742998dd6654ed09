"""Exact polynomials and rational functions over Q.

Coefficients are stored as a tuple of Python ints plus one positive common
denominator, which keeps products and divisions in fast big-integer arithmetic.
Large products use Kronecker substitution (pack coefficients into one integer,
multiply once, unpack).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

import gmpy2

Number = Union[int, Fraction]

POLE_THRESHOLD = 1e-12
_KRONECKER_MIN = 24


class NonDivisible(ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class PoleHit(ArithmeticError):
    """A rational function was evaluated too close to a root of its denominator."""


# ---------------------------------------------------------------------------
# integer polynomial kernels (lists of int, index = degree)

def _strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _content(a: Sequence[int]) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _pack(a: Sequence[int], k: int):
    """sum a_i 2^{k i} as a GMP integer, split recursively to stay near-linear."""
    n = len(a)
    if n <= 16:
        v = gmpy2.mpz(0)
        for c in reversed(a):
            v = (v << k) + c
        return v
    h = n // 2
    return _pack(a[:h], k) + (_pack(a[h:], k) << (k * h))


def _unpack(v, k: int, n: int) -> list[int]:
    """Balanced base-2^k digits of v, n digits (the last digit absorbs the carry)."""
    v = gmpy2.mpz(v)
    if n <= 16:
        out = []
        mask = (gmpy2.mpz(1) << k) - 1
        half = gmpy2.mpz(1) << (k - 1)
        for _ in range(n - 1):
            d = v & mask
            if d >= half:
                d -= gmpy2.mpz(1) << k
            out.append(int(d))
            v = (v - d) >> k
        out.append(int(v))
        return out
    h = n // 2
    # h balanced digits span at most (B/2 - 1)(B^h - 1)/(B - 1) from above
    shift = k * h
    full = gmpy2.mpz(1) << shift
    lo = v & (full - 1)
    top = ((gmpy2.mpz(1) << (k - 1)) - 1) * ((full - 1) // ((gmpy2.mpz(1) << k) - 1))
    if lo > top:
        lo -= full
    return _unpack(lo, k, h) + _unpack((v - lo) >> shift, k, n - h)


def _imul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) < _KRONECKER_MIN:
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out
    bound = max(abs(c) for c in a) * max(abs(c) for c in b) * min(len(a), len(b))
    k = bound.bit_length() + 2
    return _unpack(_pack(a, k) * _pack(b, k), k, len(a) + len(b) - 1)


def _idiv_exact(p: Sequence[int], q: Sequence[int]) -> list[int] | None:
    """Quotient s with q*s = p over Z, or None. Both inputs nonzero."""
    if len(p) < len(q):
        return None
    n = len(p) - len(q) + 1
    # Kronecker division with a Mignotte-type coefficient bound, then verify
    norm = max(abs(c) for c in p)
    k = norm.bit_length() + len(p) + 3
    pv, qv = _pack(p, k), _pack(q, k)
    s_val, rem = divmod(pv, qv)
    if rem:
        return None
    s = _unpack(s_val, k, n)
    if _imul(q, s) != list(p):
        return None
    return s


def _iderivative(a: Sequence[int]) -> list[int]:
    return [i * a[i] for i in range(1, len(a))]


def _primitive(a: Sequence[int]) -> tuple[int, list[int]]:
    c = _content(a)
    if a and a[-1] < 0:
        c = -c
    return c, [x // c for x in a]


def _heugcd(f: list[int], g: list[int]) -> list[int]:
    """Primitive gcd (positive leading coefficient) of two primitive integer polys."""
    if len(f) == 1 or len(g) == 1:
        return [1]
    bits = max(max(abs(c) for c in f).bit_length(), max(abs(c) for c in g).bit_length())
    k = bits + 4
    for _ in range(8):
        xi = (1 << k) + 1
        h = gcd(_eval_int(f, xi), _eval_int(g, xi))
        cand = _digits_base(h, xi)
        if cand:
            _, cand = _primitive(cand)
            if _idiv_exact(f, cand) is not None and _idiv_exact(g, cand) is not None:
                return cand
        k = 2 * k + 7
    return _euclid_gcd(f, g)


def _eval_int(a: Sequence[int], x: int) -> int:
    v = 0
    for c in reversed(a):
        v = v * x + c
    return v


def _digits_base(h: int, xi: int) -> list[int]:
    out = []
    half = xi // 2
    while h:
        d = h % xi
        if d > half:
            d -= xi
        out.append(d)
        h = (h - d) // xi
    return out


def _euclid_gcd(f: list[int], g: list[int]) -> list[int]:
    a = [Fraction(c) for c in f]
    b = [Fraction(c) for c in g]
    while b:
        while len(a) >= len(b) and a:
            coef = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, bi in enumerate(b):
                a[i + shift] -= coef * bi
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    den = 1
    for c in a:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    return _primitive(ints)[1]


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with rational coefficients: (num[0] + num[1] x + ...)/den."""

    num: tuple[int, ...]
    den: int = 1

    def __post_init__(self):
        num = _strip(list(self.num))
        den = self.den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-c for c in num], -den
        if not num:
            den = 1
        else:
            g = gcd(_content(num), den)
            if g > 1:
                num, den = [c // g for c in num], den // g
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", den)

    # construction -----------------------------------------------------------
    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Number]) -> "RationalPoly":
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls(tuple(int(c * den) for c in fr), den)

    @classmethod
    def const(cls, c: Number) -> "RationalPoly":
        c = Fraction(c)
        return cls((c.numerator,), c.denominator)

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls((0, 1))

    # views --------------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def degree(self) -> int:
        return len(self.num) - 1

    def is_zero(self) -> bool:
        return not self.num

    def lc(self) -> Fraction:
        return Fraction(self.num[-1], self.den)

    def __call__(self, x):
        """Exact Horner evaluation; works for Fraction, GaussRational, int, float."""
        v = 0
        for c in reversed(self.num):
            v = v * x + c
        return v / self.den if not isinstance(v, int) else Fraction(v, self.den)

    def __repr__(self) -> str:
        return f"RationalPoly({[str(c) for c in self.coeffs]})"

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "RationalPoly":
        if isinstance(other, RationalPoly):
            return other
        return RationalPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        d = self.den * other.den // gcd(self.den, other.den)
        a = [c * (d // self.den) for c in self.num]
        b = [c * (d // other.den) for c in other.num]
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPoly(tuple(out), d)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return poly_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, RationalPoly):
            try:
                other = RationalPoly.const(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def primitive(self) -> tuple[Fraction, list[int]]:
        """Split as (rational content) * (primitive integer poly, positive lc)."""
        c, prim = _primitive(list(self.num))
        return Fraction(c, self.den), prim


ZERO = RationalPoly(())
ONE = RationalPoly((1,))


def poly_mul(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    return RationalPoly(tuple(_imul(p.num, q.num)), p.den * q.den)


def poly_div_exact(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    """Return r with q*r = p, or raise NonDivisible."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    cp, pp = p.primitive()
    cq, qp = q.primitive()
    s = _idiv_exact(pp, qp)
    if s is None:
        raise NonDivisible(f"degree {p.degree} by degree {q.degree}")
    c = cp / cq
    return RationalPoly(tuple(x * c.numerator for x in s), c.denominator)


def poly_derivative(p: RationalPoly) -> RationalPoly:
    return RationalPoly(tuple(_iderivative(p.num)), p.den)


def poly_gcd(p: RationalPoly, q: RationalPoly) -> RationalPoly:
    """Monic gcd over Q (zero if both are zero)."""
    if p.is_zero():
        return ZERO if q.is_zero() else _monic(q)
    if q.is_zero():
        return _monic(p)
    g = _heugcd(p.primitive()[1], q.primitive()[1])
    return _monic(RationalPoly(tuple(g)))


def _monic(p: RationalPoly) -> RationalPoly:
    lc = p.lc()
    return RationalPoly(tuple(c * lc.denominator for c in p.num), p.den * lc.numerator)


def poly_normalized_float(p: RationalPoly) -> tuple[Fraction, list[float]]:
    """Scale by p(0) (or the leading coefficient if p(0)=0) and convert to floats."""
    if p.is_zero():
        raise ValueError("zero polynomial has no normalization")
    lead = p.num[0] if p.num[0] != 0 else p.num[-1]
    scale = Fraction(lead, p.den)
    return scale, [_ratio_float(c, lead) for c in p.num]


def _ratio_float(a: int, b: int) -> float:
    if a == b:
        return 1.0
    try:
        return a / b
    except OverflowError:
        return float(Fraction(a, b))


def _horner(coeffs: Sequence[float], z: complex) -> complex:
    v = 0j
    for c in reversed(coeffs):
        v = v * z + c
    return v


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalFunction:
    """Reduced quotient num/den with monic denominator."""

    num: RationalPoly
    den: RationalPoly = ONE

    def __post_init__(self):
        num, den = self.num, self.den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")
        if num.is_zero():
            num, den = ZERO, ONE
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = poly_div_exact(num, g), poly_div_exact(den, g)
        lc = den.lc()
        if lc != 1:
            num = num * (1 / lc)
            den = den * (1 / lc)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def const(cls, c: Number) -> "RationalFunction":
        return cls(RationalPoly.const(c))

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls(RationalPoly.x())

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, RationalPoly):
            return RationalFunction(other)
        return RationalFunction.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        out = RationalFunction.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(poly_derivative(n) * d - n * poly_derivative(d), d * d)

    def __call__(self, x):
        """Exact evaluation at a rational (or Gaussian rational) point."""
        dv = self.den(x)
        if dv == 0:
            raise PoleHit(f"pole at {x}")
        return self.num(x) / dv

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r} / {self.den!r})"


def ratfun_eval(f: RationalFunction, z: complex, threshold: float = POLE_THRESHOLD) -> complex:
    """Float evaluation through constant-term normalized coefficients."""
    if f.num.is_zero():
        return 0j
    sd, cd = poly_normalized_float(f.den)
    dv = _horner(cd, z)
    if abs(dv) < threshold * max(abs(c) for c in cd):
        raise PoleHit(f"|den({z})| = {abs(dv):.3e}")
    sn, cn = poly_normalized_float(f.num)
    return float(sn / sd) * _horner(cn, z) / dv


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussRational:
    """Exact a + b i with rational a, b."""

    re: Fraction
    im: Fraction = Fraction(0)

    @staticmethod
    def of(v) -> "GaussRational":
        if isinstance(v, GaussRational):
            return v
        if isinstance(v, complex):
            return GaussRational(Fraction(v.real), Fraction(v.imag))
        return GaussRational(Fraction(v), Fraction(0))

    def __add__(self, o):
        o = GaussRational.of(o)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussRational.of(o))

    def __rsub__(self, o):
        return GaussRational.of(o) - self

    def __mul__(self, o):
        o = GaussRational.of(o)
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussRational.of(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("Gaussian rational division by zero")
        return GaussRational((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, o):
        return GaussRational.of(o) / self

    def __eq__(self, o):
        try:
            o = GaussRational.of(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))


def to_complex(v) -> complex:
    """Float conversion for Fraction / GaussRational / numbers."""
    if isinstance(v, GaussRational):
        return complex(v)
    return complex(float(v))
