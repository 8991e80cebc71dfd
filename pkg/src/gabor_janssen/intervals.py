"""Directed-rounding interval arithmetic on MPFR numbers.

An :class:`Enclosure` is a closed interval ``[lo, hi]`` whose endpoints are
``gmpy2.mpfr`` values.  Every operation rounds ``lo`` towards -inf and ``hi``
towards +inf, so the result always contains the exact mathematical value.
The working precision of an operation is the largest precision among its
operands; there is no ambient precision.

Fast-mode code builds degenerate enclosures from Python floats; those only
support inspection (``lo``, ``hi``, ``mid``, ``width``), not arithmetic.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import DomainError

Number = Union[int, float, Fraction, str, "mpfr", "Enclosure"]

_local = threading.local()


def contexts(bits: int) -> tuple[gmpy2.context, gmpy2.context]:
    """Round-down / round-up MPFR contexts at ``bits``, cached per thread."""
    cache = getattr(_local, "ctx", None)
    if cache is None:
        cache = _local.ctx = {}
    pair = cache.get(bits)
    if pair is None:
        kw = dict(precision=bits, emin=gmpy2.get_emin_min(), emax=gmpy2.get_emax_max())
        pair = (
            gmpy2.context(round=gmpy2.RoundDown, **kw),
            gmpy2.context(round=gmpy2.RoundUp, **kw),
        )
        cache[bits] = pair
    return pair


def _exact_int(v: int) -> mpfr:
    return mpfr(v, max(2, abs(v).bit_length()))


_MPFR = type(mpfr(0))


def _prec(x) -> int:
    return x.precision if isinstance(x, _MPFR) else 53


@dataclass(frozen=True, slots=True)
class Enclosure:
    """Certified real interval ``[lo, hi]``."""

    lo: object
    hi: object

    def __post_init__(self) -> None:
        if not (self.lo <= self.hi):
            raise ValueError(f"invalid enclosure [{self.lo}, {self.hi}]")

    # construction -----------------------------------------------------

    @classmethod
    def exact(cls, value: Number, bits: int) -> "Enclosure":
        """Tightest enclosure of an exactly known real at ``bits``."""
        if isinstance(value, Enclosure):
            return value
        dn, up = contexts(bits)
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, (int, type(mpz(0)))):
            x = _exact_int(int(value))
            return cls(dn.plus(x), up.plus(x))
        if isinstance(value, float):
            if not math.isfinite(value):
                raise DomainError(f"non-finite value {value!r}")
            x = mpfr(value, 53)
            return cls(dn.plus(x), up.plus(x))
        if isinstance(value, _MPFR):
            return cls(dn.plus(value), up.plus(value))
        if isinstance(value, (Fraction, type(mpq(0)))):
            num, den = _exact_int(int(value.numerator)), _exact_int(int(value.denominator))
            return cls(dn.div(num, den), up.div(num, den))
        raise TypeError(f"cannot enclose {type(value).__name__}")

    @classmethod
    def point(cls, value: float) -> "Enclosure":
        """Degenerate fast-mode enclosure (not certified)."""
        return cls(value, value)

    # inspection ---------------------------------------------------------

    @property
    def bits(self) -> int:
        return max(_prec(self.lo), _prec(self.hi))

    @property
    def width(self):
        if isinstance(self.lo, _MPFR):
            return contexts(self.bits)[1].sub(self.hi, self.lo)
        return self.hi - self.lo

    @property
    def mid(self):
        if isinstance(self.lo, _MPFR):
            ctx = contexts(self.bits + 1)[0]
            return ctx.div_2exp(ctx.add(self.lo, self.hi), 1)
        return 0.5 * (self.lo + self.hi)

    def __contains__(self, value) -> bool:
        if isinstance(value, Enclosure):
            return self.lo <= value.lo and value.hi <= self.hi
        if isinstance(value, str):
            value = Fraction(value)
        return bool(self.lo <= value <= self.hi)

    def intersects(self, other: "Enclosure") -> bool:
        return bool(self.lo <= other.hi and other.lo <= self.hi)

    def hull(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def float_lo(self) -> float:
        return round_down_float(self.lo)

    def float_hi(self) -> float:
        return round_up_float(self.hi)

    def __repr__(self) -> str:
        if isinstance(self.lo, _MPFR):
            return f"Enclosure([{self.float_lo()!r}, {self.float_hi()!r}], bits={self.bits})"
        return f"Enclosure([{self.lo!r}, {self.hi!r}])"

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.exact(other, self.bits)

    def __add__(self, other):
        o = self._coerce(other)
        dn, up = contexts(max(self.bits, o.bits))
        return Enclosure(dn.add(self.lo, o.lo), up.add(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        dn, up = contexts(max(self.bits, o.bits))
        return Enclosure(dn.sub(self.lo, o.hi), up.sub(self.hi, o.lo))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        if not isinstance(self.lo, _MPFR):
            return Enclosure(-self.hi, -self.lo)
        dn, _ = contexts(self.bits)
        return Enclosure(dn.minus(self.hi), dn.minus(self.lo))

    def __mul__(self, other):
        o = self._coerce(other)
        dn, up = contexts(max(self.bits, o.bits))
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        if a >= 0 and c >= 0:
            return Enclosure(dn.mul(a, c), up.mul(b, d))
        if b <= 0 and d <= 0:
            return Enclosure(dn.mul(b, d), up.mul(a, c))
        lo = min(dn.mul(a, c), dn.mul(a, d), dn.mul(b, c), dn.mul(b, d))
        hi = max(up.mul(a, c), up.mul(a, d), up.mul(b, c), up.mul(b, d))
        return Enclosure(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("divisor enclosure contains zero")
        dn, up = contexts(max(self.bits, o.bits))
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        lo = min(dn.div(a, c), dn.div(a, d), dn.div(b, c), dn.div(b, d))
        hi = max(up.div(a, c), up.div(a, d), up.div(b, c), up.div(b, d))
        return Enclosure(lo, hi)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        dn, _ = contexts(self.bits)
        return Enclosure(dn.plus(0), max(dn.minus(self.lo), self.hi))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise TypeError("only non-negative integer powers are supported")
        if k == 0:
            return Enclosure.exact(1, self.bits)
        dn, up = contexts(self.bits)
        base = abs(self) if k % 2 == 0 else self
        return Enclosure(dn.pow(base.lo, k), up.pow(base.hi, k))

    def square(self):
        return self ** 2

    def exp(self):
        dn, up = contexts(self.bits)
        return Enclosure(dn.exp(self.lo), up.exp(self.hi))

    def log(self):
        if self.lo <= 0:
            raise DomainError("log of an enclosure reaching zero or below")
        dn, up = contexts(self.bits)
        return Enclosure(dn.log(self.lo), up.log(self.hi))

    def sqrt(self):
        if self.lo < 0:
            raise DomainError("sqrt of an enclosure reaching below zero")
        dn, up = contexts(self.bits)
        return Enclosure(dn.sqrt(self.lo), up.sqrt(self.hi))

    def _lipschitz(self, fname: str):
        # |f'| <= 1 for sin and cos: f(mid) +- radius, clipped to [-1, 1]
        dn, up = contexts(self.bits)
        m = self.mid
        r = max(up.sub(m, self.lo), up.sub(self.hi, m))
        lo = dn.sub(getattr(dn, fname)(m), r)
        hi = up.add(getattr(up, fname)(m), r)
        return Enclosure(max(lo, dn.plus(-1)), min(hi, dn.plus(1)))

    def cos(self):
        return self._lipschitz("cos")

    def sin(self):
        return self._lipschitz("sin")

    # certified comparisons ---------------------------------------------

    def certainly_lt(self, other) -> bool:
        o = self._coerce(other) if not isinstance(other, (int, float, Fraction)) else other
        bound = o.lo if isinstance(o, Enclosure) else o
        return bool(self.hi < bound)

    def certainly_gt(self, other) -> bool:
        o = self._coerce(other) if not isinstance(other, (int, float, Fraction)) else other
        bound = o.hi if isinstance(o, Enclosure) else o
        return bool(self.lo > bound)


def enclose(value: Number, bits: int) -> Enclosure:
    return Enclosure.exact(value, bits)


def pi(bits: int) -> Enclosure:
    dn, up = contexts(bits)
    return Enclosure(dn.const_pi(), up.const_pi())


def cospi(r: Fraction, bits: int) -> Enclosure:
    """cos(pi*r) for rational r, exact at multiples of 1/2."""
    r = Fraction(r) % 2
    exact = {Fraction(0): 1, Fraction(1, 2): 0, Fraction(1): -1, Fraction(3, 2): 0}
    if r in exact:
        return Enclosure.exact(exact[r], bits)
    return (pi(bits) * r).cos()


def sinpi(r: Fraction, bits: int) -> Enclosure:
    """sin(pi*r) for rational r, exact at multiples of 1/2."""
    r = Fraction(r) % 2
    exact = {Fraction(0): 0, Fraction(1, 2): 1, Fraction(1): 0, Fraction(3, 2): -1}
    if r in exact:
        return Enclosure.exact(exact[r], bits)
    return (pi(bits) * r).sin()


def round_up_float(x) -> float:
    """Smallest double >= x (inf on overflow)."""
    f = float(x)
    if f < x:
        f = math.nextafter(f, math.inf)
    return f


def round_down_float(x) -> float:
    """Largest double <= x (-inf on overflow)."""
    f = float(x)
    if f > x:
        f = math.nextafter(f, -math.inf)
    return f


def to_fraction(x) -> Fraction:
    """Exact rational value of an mpfr/float/int."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


def ceil_decimals(x, digits: int = 5) -> Fraction:
    """ceil(x * 10**digits) / 10**digits, computed exactly."""
    scale = 10 ** digits
    return Fraction(math.ceil(to_fraction(x) * scale), scale)


def encode_mpfr(x) -> str:
    """Lossless text form ``<mantissa>*2^<exp>`` of an mpfr."""
    if gmpy2.is_zero(x):
        return "0*2^0"
    m, e = x.as_mantissa_exp()
    return f"{int(m)}*2^{int(e)}"


def decode_mpfr(text: str, bits: int):
    m, e = text.split("*2^")
    m, e = int(m), int(e)
    x = _exact_int(m)
    prec = max(bits, _prec(x))
    dn, _ = contexts(prec)
    return dn.mul_2exp(x, e)
