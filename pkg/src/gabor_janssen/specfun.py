"""Laguerre polynomials and the analytic bounds used by the tail estimates.

Certified quantities are :class:`~gabor_janssen.intervals.Enclosure` values.
Functions that take a real argument accept exact numbers (``int``,
``Fraction``, decimal strings, floats) or an ``Enclosure``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Literal, NamedTuple

from .errors import (
    DomainError,
    HypothesisViolated,
    OrderTooLarge,
    OrderTooSmall,
    PrecisionExhausted,
)
from .intervals import Enclosure, pi, round_up_float, to_fraction

Mode = Literal["fast", "certified"]


@dataclass(frozen=True, slots=True)
class PrecisionConfig:
    """How to evaluate: doubles (``fast``) or MPFR intervals (``certified``).

    Certified evaluation starts at ``bits`` and doubles the precision until
    the enclosure is no wider than ``target_width``, giving up past
    ``max_bits``.
    """

    mode: Mode = "certified"
    bits: int = 128
    target_width: float = 1e-30
    max_bits: int = 8192

    def __post_init__(self) -> None:
        if self.mode not in ("fast", "certified"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.bits < 53:
            raise ValueError("bits must be at least 53")
        if not self.target_width > 0:
            raise ValueError("target_width must be positive")
        if self.max_bits < self.bits:
            raise ValueError("max_bits must be at least bits")

    @property
    def certified(self) -> bool:
        return self.mode == "certified"


CERTIFIED = PrecisionConfig()
FAST = PrecisionConfig(mode="fast")


def refine(compute: Callable[[int], Enclosure], prec: PrecisionConfig,
           width: Callable[[Enclosure], object] | None = None) -> Enclosure:
    """Call ``compute(bits)`` with doubling precision until narrow enough."""
    bits = prec.bits
    while True:
        enc = compute(bits)
        w = enc.width if width is None else width(enc)
        if w <= prec.target_width:
            return enc
        if bits * 2 > prec.max_bits:
            raise PrecisionExhausted(
                f"width {float(w):.3g} > {prec.target_width:g} at {bits} bits"
            )
        bits *= 2


# ---------------------------------------------------------------------------
# log-magnitude doubles


@dataclass(frozen=True, slots=True)
class LogSigned:
    """A real number stored as a sign and the natural log of its magnitude."""

    sign: int
    log_mag: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")
        if (self.sign == 0) != (self.log_mag == -math.inf):
            raise ValueError("sign is zero exactly when log_mag is -inf")

    @classmethod
    def from_float(cls, x: float) -> "LogSigned":
        if x == 0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def __mul__(self, other: "LogSigned") -> "LogSigned":
        if self.sign == 0 or other.sign == 0:
            return ZERO_LS
        return LogSigned(self.sign * other.sign, self.log_mag + other.log_mag)

    def scale_exp(self, t: float) -> "LogSigned":
        """Multiply by e**t."""
        if self.sign == 0:
            return self
        return LogSigned(self.sign, self.log_mag + t)

    def __abs__(self) -> "LogSigned":
        return LogSigned(abs(self.sign), self.log_mag)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_mag > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_mag)


ZERO_LS = LogSigned(0, -math.inf)

_RESCALE = 1e150


def laguerre_logsigned(n: int, x: float) -> LogSigned:
    """Laguerre recurrence in doubles with periodic rescaling."""
    _check_order(n)
    x = float(x)
    if n == 0:
        return LogSigned(1, 0.0)
    prev, cur, shift = 1.0, 1.0 - x, 0.0
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
        if abs(cur) > _RESCALE:
            prev /= _RESCALE
            cur /= _RESCALE
            shift += math.log(_RESCALE)
    if cur == 0:
        return ZERO_LS
    return LogSigned(1 if cur > 0 else -1, math.log(abs(cur)) + shift)


# ---------------------------------------------------------------------------
# Laguerre polynomials


def _check_order(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise DomainError(f"order must be a non-negative integer, got {n!r}")


def laguerre_explicit(n: int, x) -> Fraction:
    """Exact value of the n-th Laguerre polynomial at a rational point."""
    _check_order(n)
    if n > 64:
        raise OrderTooLarge(f"exact expansion limited to n <= 64, got {n}")
    x = Fraction(x)
    total = Fraction(0)
    power = Fraction(1)
    for k in range(n + 1):
        total += math.comb(n, k) * power / math.factorial(k)
        power *= -x
    return total


@lru_cache(maxsize=None)
def laguerre_coefficients(n: int) -> tuple[Fraction, ...]:
    """Exact monomial coefficients, lowest degree first."""
    _check_order(n)
    return tuple(Fraction((-1) ** k * math.comb(n, k), math.factorial(k)) for k in range(n + 1))


def laguerre_enclosure(n: int, x: Enclosure) -> Enclosure:
    """One pass of the three-term recurrence in interval arithmetic."""
    _check_order(n)
    one = Enclosure.exact(1, x.bits)
    if n == 0:
        return one
    prev, cur = one, one - x
    for k in range(1, n):
        prev, cur = cur, ((x - (2 * k + 1)) * cur + k * prev) / (-(k + 1))
    return cur


def laguerre_eval(n: int, x, prec: PrecisionConfig = CERTIFIED) -> Enclosure:
    """Enclosure of the n-th Laguerre polynomial at ``x``.

    Exact arguments are refined until the width target is met.  An
    ``Enclosure`` argument is evaluated once at its own precision, since its
    width cannot be reduced here.
    """
    _check_order(n)
    if not prec.certified:
        val = x.mid if isinstance(x, Enclosure) else x
        return Enclosure.point(float(laguerre_logsigned(n, float(val))))
    if isinstance(x, Enclosure):
        return laguerre_enclosure(n, x)
    if isinstance(x, float) and not math.isfinite(x):
        raise DomainError("x must be finite")
    return refine(lambda bits: laguerre_enclosure(n, Enclosure.exact(x, bits)), prec)


def laguerre_range(n: int, x: Enclosure) -> Enclosure:
    """Enclosure of the range of the n-th Laguerre polynomial over a wide interval.

    Expands the polynomial exactly around the midpoint ``x0`` and bounds
    ``sum d_j t**j`` for ``|t| <= r`` by ``d_0 +- sum |d_j| r**j``.  This
    stays tight when the argument interval is wide, where the plain
    recurrence would blow up.
    """
    coeffs = laguerre_coefficients(n)
    x0 = to_fraction(x.mid)
    bits = x.bits
    r = max(to_fraction(x.hi) - x0, x0 - to_fraction(x.lo))
    # Taylor coefficients at x0: d_j = sum_k c_k C(k, j) x0^(k-j)
    powers = [Fraction(1)]
    for _ in range(n):
        powers.append(powers[-1] * x0)
    d = [
        sum(coeffs[k] * math.comb(k, j) * powers[k - j] for k in range(j, n + 1))
        for j in range(n + 1)
    ]
    spread = sum(abs(d[j]) * r ** j for j in range(1, n + 1))
    return Enclosure.exact(d[0] - spread, bits).hull(Enclosure.exact(d[0] + spread, bits))


# ---------------------------------------------------------------------------
# analytic bounds


def _enc(x, bits: int) -> Enclosure:
    return x if isinstance(x, Enclosure) else Enclosure.exact(x, bits)


def szego_bound(x) -> float:
    """e^(x/2), rounded up to a double; dominates |L_n(x)| for x >= 0."""
    xe = _enc(x, 64)
    if xe.lo < 0:
        raise DomainError("Szego bound needs x >= 0")
    return round_up_float((xe / 2).exp().hi)


def crude_bound(n: int, x, bits: int = 128) -> Enclosure:
    """(n+1) C(n, n//2) x^n, valid as a bound on |L_n(x)| for x >= 1."""
    _check_order(n)
    xe = _enc(x, bits)
    if xe.lo < 1:
        raise DomainError("crude bound needs x >= 1")
    return (xe ** n) * ((n + 1) * math.comb(n, n // 2))


def largest_root_upper(n: int) -> float:
    """2n+1 + sqrt((2n+1)^2 + 1/4), rounded up; every root of L_n lies below it."""
    _check_order(n)
    if n < 1:
        raise DomainError("L_0 has no roots")
    m = 2 * n + 1
    root = Enclosure.exact(Fraction(4 * m * m + 1, 4), 64).sqrt()
    return round_up_float((root + m).hi)


class LayerBounds(NamedTuple):
    at_minus: Enclosure   # bound for L_n(-pi (n+1))
    at_one: Enclosure     # bound for |L_n(pi (n+1))|
    at_two: Enclosure     # bound for |L_n(2 pi (n+1))|


def krasikov_layer_bounds(n: int, bits: int = 128) -> LayerBounds:
    """Upper bounds for L_n at -pi(n+1), pi(n+1) and 2pi(n+1), for n >= 11."""
    _check_order(n)
    if n < 11:
        raise OrderTooSmall(f"layer bounds need n >= 11, got {n}")
    p = pi(bits)
    b1 = ((p + 1) * (n + 1)).exp()
    b2 = (p * Fraction(n + 1, 2)).exp() * Enclosure.exact(Fraction(2, n), bits).sqrt()
    b3 = (
        (p * (n + 1)).exp()
        * (Enclosure.exact(2, bits) / p).sqrt()
        * Enclosure.exact(-Fraction(n, 10) - Fraction(86, 100), bits).exp()
    )
    return LayerBounds(b1, b2, b3)


def kras1_interval(n: int, bits: int = 128) -> tuple[Enclosure, Enclosure]:
    """Enclosures of q^2 and s^2 with q, s = sqrt(n+1) -+ sqrt(n)."""
    root = Enclosure.exact(n * (n + 1), bits).sqrt() * 2
    return (2 * n + 1) - root, root + (2 * n + 1)


def kras1_bound(n: int, x, prec: PrecisionConfig = CERTIFIED) -> Enclosure:
    """e^(x/2) sqrt((s^2-q^2) / ((x-q^2)(s^2-x))), bounding |L_n(x)| inside (q^2, s^2)."""
    _check_order(n)
    if n < 2:
        raise OrderTooSmall("Kras1 needs n >= 2")
    bits = prec.bits
    xe = _enc(x, bits)
    q2, s2 = kras1_interval(n, bits)
    left, right = xe - q2, s2 - xe
    if not (left.lo > prec.target_width and right.lo > prec.target_width):
        raise DomainError(f"x must lie strictly inside (q^2, s^2) for n={n}")
    return (xe / 2).exp() * ((s2 - q2) / (left * right)).sqrt()


def incomplete_gamma_upper(s, x, B, bits: int = 128) -> Enclosure:
    """B x^(s-1) e^(-x), bounding Gamma(s, x) when x > B(s-1)/(B-1)."""
    se, xe, be = _enc(s, bits), _enc(x, bits), _enc(B, bits)
    if not (be.lo > 1 and se.lo > 0):
        raise HypothesisViolated("need B > 1 and s > 0")
    if not xe.certainly_gt(be * (se - 1) / (be - 1)):
        raise HypothesisViolated("need x > B(s-1)/(B-1)")
    return be * ((se - 1) * xe.log() - xe).exp()


def gamma_tail_bound(n: int, gamma, a=None, *, a_squared=None, bits: int = 128) -> Enclosure:
    """Bound on sum over k^2+l^2 >= A of (k^2+l^2)^n e^(-c (k^2+l^2)).

    Here ``c = pi*gamma/2`` and ``A = a**2``.  Returns
    ``4 (1 + 2/c) A^(n+1) e^(-c A)``, valid when ``A >= 4`` and
    ``c A > 2(n+1)``.  Using ``r2(m) <= 4m`` the sum is dominated by
    ``4 g(A) + 4 * integral_A^inf g`` with ``g(t) = t^(n+1) e^(-c t)``
    decreasing past ``A``, and the integral is an upper incomplete gamma
    function bounded with ``B = 2``.
    """
    _check_order(n)
    if (a is None) == (a_squared is None):
        raise TypeError("pass exactly one of a, a_squared")
    A = _enc(a_squared, bits) if a is None else _enc(a, bits).square()
    c = pi(bits) * _enc(gamma, bits) / 2
    if A.lo < 4:
        raise HypothesisViolated("need a >= 2")
    cA = c * A
    if not cA.certainly_gt(2 * (n + 1)):
        raise HypothesisViolated("need pi*gamma*a^2/2 > 2(n+1)")
    return ((2 / c) + 1) * 4 * (A ** (n + 1)) * (-cA).exp()


def power_geometric_tail(p: int, q, N: int, *, target_width: float = 1e-30,
                         bits: int = 128, max_terms: int = 1_000_000) -> Enclosure:
    """Enclosure of sum_{m >= N} m^p q^m.

    Terms are summed with outward rounding while the term ratio
    ``r_m = ((m+1)/m)^p q`` is at least 1 or the geometric remainder
    ``term * r/(1-r)`` exceeds ``target_width`` times the partial sum.  The
    remainder is then added to the upper endpoint.
    """
    if p < 1 or N < 1:
        raise DomainError("need p >= 1 and N >= 1")
    qe = _enc(q, bits)
    if not (qe.lo > 0 and qe.hi < 1):
        raise DomainError("need 0 < q < 1")
    # the ratio ((m+1)/m)^p q falls with m, so checking it at N suffices
    if (Enclosure.exact(Fraction(N + 1, N), bits) ** p * qe).certainly_gt(1):
        raise HypothesisViolated(f"m^{p} q^m is still increasing at m={N}")
    total = Enclosure.exact(0, bits)
    term = Enclosure.exact(N, bits) ** p * qe ** N
    m = N
    for _ in range(max_terms):
        total = total + term
        ratio = (Enclosure.exact(Fraction(m + 1, m), bits) ** p) * qe
        if ratio.hi >= 1:
            term = term * ratio
            m += 1
            continue
        rem = term * ratio / (1 - ratio)
        if rem.hi <= total.lo * target_width:
            return Enclosure(total.lo, (total + rem).hi)
        term = term * ratio
        m += 1
    raise PrecisionExhausted("power-geometric sum did not converge")


def power_geometric_numerator(p: int, N: int) -> list[int]:
    """Integer coefficients P_p (lowest degree first) with
    sum_{m >= N} m^p q^m = q^N P_p(q) / (1-q)^(p+1)."""
    poly = [1]
    for k in range(p):
        # P_{k+1} = (N P + q P') (1 - q) + (k+1) q P
        deriv_q = [j * c for j, c in enumerate(poly)]          # q P'(q)
        inner = [N * c + d for c, d in zip(poly, deriv_q)]
        nxt = [0] * (len(poly) + 1)
        for j, c in enumerate(inner):
            nxt[j] += c
            nxt[j + 1] -= c
        for j, c in enumerate(poly):
            nxt[j + 1] += (k + 1) * c
        while len(nxt) > 1 and nxt[-1] == 0:
            nxt.pop()
        poly = nxt
    return poly
