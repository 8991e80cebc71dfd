"""Ambiguity function of Hermite windows and Janssen-test lattice sums.

The ambiguity function of the n-th Hermite function against itself is

    V(x, w) = exp(-pi i x w) * L_n(pi (x^2 + w^2)) * exp(-pi (x^2 + w^2) / 2)

and the Janssen test sums ``|V|`` over the adjoint lattice.  A sum below 2
proves the frame property.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

from . import kernels
from .errors import DomainError, HypothesisViolated
from .intervals import (
    Enclosure,
    contexts,
    cospi,
    decode_mpfr,
    encode_mpfr,
    pi,
    round_up_float,
    sinpi,
    to_fraction,
)
from .lattice import RectLattice
from .specfun import (
    CERTIFIED,
    PrecisionConfig,
    gamma_tail_bound,
    laguerre_enclosure,
    laguerre_logsigned,
    power_geometric_tail,
    refine,
)


@dataclass(frozen=True, slots=True)
class HermiteWindow:
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise DomainError(f"Hermite order must be a non-negative integer, got {self.n!r}")


def _order(n: Union[int, HermiteWindow]) -> int:
    return HermiteWindow(n).n if isinstance(n, int) else n.n


class Verdict(str, enum.Enum):
    FRAME_CERTIFIED = "frame-certified"
    INCONCLUSIVE = "inconclusive"
    FAST_ESTIMATE = "fast-estimate"


class TailKind(str, enum.Enum):
    GAMMA_INTEGRAL = "gamma-integral"
    CRUDE_POWER_GEO = "crude-power-geo"


@dataclass(frozen=True, slots=True)
class MaxNorm:
    """Finite part over max(|k|, |l|) <= M."""

    M: int

    def __str__(self) -> str:
        return f"maxnorm:{self.M}"


@dataclass(frozen=True, slots=True)
class Euclid:
    """Finite part over k^2 + l^2 < R2."""

    R2: int

    def __str__(self) -> str:
        return f"euclid:{self.R2}"


Cutoff = Union[MaxNorm, Euclid]


def parse_cutoff(text: str) -> Cutoff:
    kind, _, value = text.partition(":")
    try:
        v = int(value)
    except ValueError:
        raise ValueError(f"bad cutoff {text!r}; expected maxnorm:M or euclid:R2") from None
    if kind == "maxnorm" and v >= 0:
        return MaxNorm(v)
    if kind == "euclid" and v >= 1:
        return Euclid(v)
    raise ValueError(f"bad cutoff {text!r}; expected maxnorm:M or euclid:R2")


@dataclass(frozen=True, slots=True)
class TailStrategy:
    kind: TailKind = TailKind.CRUDE_POWER_GEO
    cutoff: Cutoff = MaxNorm(5)

    def __post_init__(self) -> None:
        if self.kind is TailKind.GAMMA_INTEGRAL:
            if not isinstance(self.cutoff, Euclid) or self.cutoff.R2 < 4:
                raise ValueError("the gamma-integral tail needs a Euclid cutoff with R2 >= 4")
        elif not isinstance(self.cutoff, MaxNorm):
            raise ValueError("the crude power-geometric tail needs a max-norm cutoff")

    @classmethod
    def for_cutoff(cls, cutoff: Cutoff) -> "TailStrategy":
        kind = TailKind.GAMMA_INTEGRAL if isinstance(cutoff, Euclid) else TailKind.CRUDE_POWER_GEO
        return cls(kind, cutoff)


DEFAULT_STRATEGY = TailStrategy()


# ---------------------------------------------------------------------------
# pointwise values


def _exact_or_enclosure(v, bits: int):
    if isinstance(v, Enclosure):
        return v
    if isinstance(v, float):
        if not math.isfinite(v):
            raise DomainError("coordinates must be finite")
        return Fraction(v)
    return Fraction(v)


def _damped(n: int, r: Enclosure, bits: int) -> Enclosure:
    """|L_n(pi r)| exp(-pi r / 2)."""
    x = pi(bits) * r
    return abs(laguerre_enclosure(n, x)) * (-x / 2).exp()


def ambiguity_mag(n, x, w, prec: PrecisionConfig = CERTIFIED) -> Enclosure:
    """Enclosure of |V(x, w)| for the Hermite window of order n."""
    n = _order(n)
    if not prec.certified:
        r = float(x) ** 2 + float(w) ** 2
        return Enclosure.point(kernels.damped_abs(n, math.pi * r))

    def compute(bits: int) -> Enclosure:
        xe, we = _exact_or_enclosure(x, bits), _exact_or_enclosure(w, bits)
        if not isinstance(xe, Enclosure) and not isinstance(we, Enclosure):
            r = xe * xe + we * we
            if r == 0:
                return Enclosure.exact(1, bits)
            return _damped(n, Enclosure.exact(r, bits), bits)
        r = Enclosure.exact(xe, bits).square() + Enclosure.exact(we, bits).square()
        return _damped(n, r, bits)

    if isinstance(x, Enclosure) or isinstance(w, Enclosure):
        return compute(max(prec.bits, getattr(x, "bits", 0), getattr(w, "bits", 0)))
    return refine(compute, prec)


def ambiguity_signed(n, x, w, prec: PrecisionConfig = CERTIFIED) -> tuple[Enclosure, Enclosure]:
    """Enclosures of the real and imaginary parts of V(x, w)."""
    n = _order(n)
    if not prec.certified:
        xf, wf = float(x), float(w)
        r = xf * xf + wf * wf
        mag = float(kernels_signed(n, math.pi * r))
        return (Enclosure.point(mag * math.cos(math.pi * xf * wf)),
                Enclosure.point(-mag * math.sin(math.pi * xf * wf)))

    def compute(bits: int) -> tuple[Enclosure, Enclosure]:
        xe, we = _exact_or_enclosure(x, bits), _exact_or_enclosure(w, bits)
        if not isinstance(xe, Enclosure) and not isinstance(we, Enclosure):
            r, xw = xe * xe + we * we, xe * we
            c, s = cospi(xw, bits), sinpi(xw, bits)
            re_ = Enclosure.exact(r, bits)
        else:
            xe, we = Enclosure.exact(xe, bits), Enclosure.exact(we, bits)
            re_ = xe.square() + we.square()
            phase = pi(bits) * xe * we
            c, s = phase.cos(), phase.sin()
        xarg = pi(bits) * re_
        val = laguerre_enclosure(n, xarg) * (-xarg / 2).exp()
        return val * c, -(val * s)

    bits = prec.bits
    if isinstance(x, Enclosure) or isinstance(w, Enclosure):
        return compute(max(bits, getattr(x, "bits", 0), getattr(w, "bits", 0)))
    while True:
        re, im = compute(bits)
        if max(re.width, im.width) <= prec.target_width or bits * 2 > prec.max_bits:
            return re, im
        bits *= 2


def kernels_signed(n: int, x: float) -> float:
    return float(laguerre_logsigned(n, x).scale_exp(-0.5 * x))


# ---------------------------------------------------------------------------
# lattice sums


@lru_cache(maxsize=4096)
def point_groups(adj: RectLattice, cutoff: Cutoff) -> tuple[tuple[Fraction, int], ...]:
    """Adjoint-lattice points inside the cutoff grouped by exact squared norm.

    Returns ``(r, count)`` pairs in ascending ``r``.
    """
    groups: dict[Fraction, int] = {}
    if isinstance(cutoff, MaxNorm):
        kmax = cutoff.M
        inside = lambda k, l: True  # noqa: E731
    else:
        kmax = math.isqrt(max(cutoff.R2 - 1, 0))
        inside = lambda k, l: k * k + l * l < cutoff.R2  # noqa: E731
    for k in range(kmax + 1):
        for l in range(kmax + 1):
            if inside(k, l):
                r = adj.norm2(k, l)
                groups[r] = groups.get(r, 0) + (1 if k == 0 else 2) * (1 if l == 0 else 2)
    return tuple(sorted(groups.items()))


def _finite_part_at(n: int, adj: RectLattice, cutoff: Cutoff, bits: int) -> Enclosure:
    total = Enclosure.exact(0, bits)
    for r, count in point_groups(adj, cutoff):
        if r == 0:
            total = total + count
        else:
            total = total + _damped(n, Enclosure.exact(r, bits), bits) * count
    return total


@lru_cache(maxsize=1024)
def finite_part(n: int, lattice: RectLattice, cutoff: Cutoff,
                prec: PrecisionConfig = CERTIFIED) -> Enclosure:
    """Sum of |V| over the adjoint-lattice points inside the cutoff."""
    adj = lattice.adjoint()
    if not prec.certified:
        if isinstance(cutoff, MaxNorm):
            v = kernels.box_sum(n, float(adj.a2), float(adj.b2), cutoff.M)
        else:
            v = kernels.disc_sum(n, float(adj.a2), float(adj.b2), cutoff.R2)
        return Enclosure.point(v)
    return refine(lambda bits: _finite_part_at(n, adj, cutoff, bits), prec)


def _min_step2(adj: RectLattice) -> Fraction:
    return min(adj.a2, adj.b2)


@lru_cache(maxsize=4096)
def _tail(n: int, lattice: RectLattice, strategy: TailStrategy, bits: int,
          target_width: float) -> Enclosure:
    adj = lattice.adjoint()
    s2 = _min_step2(adj)
    p = pi(bits)
    ps2 = p * s2
    if strategy.kind is TailKind.CRUDE_POWER_GEO:
        N = (strategy.cutoff.M + 1) ** 2
        if (ps2 * N).lo < 1:
            raise HypothesisViolated("crude bound needs pi * step^2 * (M+1)^2 >= 1")
        if not adj.is_square and not (ps2 * N).lo >= 2 * n:
            raise HypothesisViolated(
                "rectangular embedding needs pi * step^2 * (M+1)^2 >= 2n"
            )
        q = (-ps2 / 2).exp()
        series = power_geometric_tail(n + 1, q, N, target_width=target_width, bits=bits)
        # crude bound (n+1) C(n, n//2) x^n at x = pi s2 m, with r2(m) <= 4m
        lead = (ps2 ** n) * ((n + 1) * math.comb(n, n // 2))
        return lead * 4 * series
    # gamma-integral route: |L_n(x)| <= L_n(-x) <= t^n L_n(-pi s2) for x = pi s2 t, t >= 1
    A = strategy.cutoff.R2
    at_minus = laguerre_enclosure(n, -ps2)
    crude = (ps2 ** n) * ((n + 1) * math.comb(n, n // 2))
    lead = at_minus if at_minus.hi <= crude.hi else crude
    return lead * gamma_tail_bound(n, s2, a_squared=A, bits=bits)


def _log_power_geometric(p: int, log_q: float, N: int) -> float:
    """log of sum_{m >= N} m^p q^m in doubles."""
    logs = []
    m = N
    while True:
        logs.append(p * math.log(m) + m * log_q)
        ratio = p * math.log1p(1 / m) + log_q
        if ratio < 0 and logs[-1] - max(logs) < -40:
            break
        m += 1
        if m - N > 10 ** 6:
            raise HypothesisViolated("power-geometric series converges too slowly")
    top = max(logs)
    total = math.fsum(math.exp(v - top) for v in logs)
    # geometric remainder after the last term
    r = math.exp(p * math.log1p(1 / m) + log_q)
    total += math.exp(logs[-1] - top) * r / (1 - r)
    return top + math.log(total)


@lru_cache(maxsize=4096)
def _fast_tail(n: int, lattice: RectLattice, strategy: TailStrategy) -> float:
    """Double-precision version of the tail bound for fast mode."""
    adj = lattice.adjoint()
    ps2 = math.pi * float(_min_step2(adj))
    if strategy.kind is TailKind.CRUDE_POWER_GEO:
        N = (strategy.cutoff.M + 1) ** 2
        if ps2 * N < 1 or (not adj.is_square and ps2 * N < 2 * n):
            raise HypothesisViolated("crude tail guard fails for this lattice")
        if (n + 1) * math.log1p(1 / N) - ps2 / 2 > 0:
            raise HypothesisViolated(f"m^{n + 1} q^m is still increasing at m={N}")
        log_lead = math.log(4 * (n + 1) * math.comb(n, n // 2)) + n * math.log(ps2)
        log_tail = log_lead + _log_power_geometric(n + 1, -ps2 / 2, N)
    else:
        A = strategy.cutoff.R2
        c = ps2 / 2
        if c * A <= 2 * (n + 1):
            raise HypothesisViolated("need pi*gamma*a^2/2 > 2(n+1)")
        lead = laguerre_logsigned(n, -ps2).log_mag
        log_tail = lead + math.log(4 * (1 + 2 / c)) + (n + 1) * math.log(A) - c * A
    return math.exp(log_tail) if log_tail < 709 else math.inf


def tail_bound(n, lattice: RectLattice, strategy: TailStrategy = DEFAULT_STRATEGY,
               prec: PrecisionConfig = CERTIFIED) -> Enclosure:
    """Certified upper bound (``.hi``) on the sum of |V| outside the cutoff.

    Non-square lattices are bounded through the square grid whose step is
    the smaller adjoint step.
    """
    if prec.certified:
        return _tail(_order(n), lattice, strategy, prec.bits, prec.target_width)
    return Enclosure.point(_fast_tail(_order(n), lattice, strategy))


@dataclass(frozen=True)
class JanssenReport:
    n: int
    lattice: RectLattice
    finite_part: Enclosure
    tail_upper: object
    total_upper: object
    verdict: Verdict
    cutoff: str
    mode: str
    ledger: tuple[tuple[str, object], ...] = field(default=())

    @property
    def value(self) -> float:
        return round_up_float(self.total_upper)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "a2": str(self.lattice.a2),
            "b2": str(self.lattice.b2),
            "finite_part": enclosure_to_json(self.finite_part),
            "tail_upper": real_to_json(self.tail_upper),
            "total_upper": real_to_json(self.total_upper),
            "verdict": self.verdict.value,
            "cutoff": self.cutoff,
            "mode": self.mode,
            "ledger": [[k, v] for k, v in self.ledger],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "JanssenReport":
        return cls(
            n=d["n"],
            lattice=RectLattice(Fraction(d["a2"]), Fraction(d["b2"])),
            finite_part=enclosure_from_json(d["finite_part"]),
            tail_upper=real_from_json(d["tail_upper"]),
            total_upper=real_from_json(d["total_upper"]),
            verdict=Verdict(d["verdict"]),
            cutoff=d["cutoff"],
            mode=d["mode"],
            ledger=tuple((k, v) for k, v in d["ledger"]),
        )


def real_to_json(x) -> object:
    if isinstance(x, float):
        return x
    return {"value": float(format(round_up_float(x), ".17g")), "exact": encode_mpfr(x),
            "bits": int(x.precision)}


def real_from_json(d):
    if isinstance(d, dict):
        return decode_mpfr(d["exact"], d["bits"])
    return float(d)


def enclosure_to_json(e: Enclosure) -> dict:
    if isinstance(e.lo, float):
        return {"lo": e.lo, "hi": e.hi}
    return {
        "lo": float(format(e.float_lo(), ".17g")),
        "hi": float(format(e.float_hi(), ".17g")),
        "lo_exact": encode_mpfr(e.lo),
        "hi_exact": encode_mpfr(e.hi),
        "bits": e.bits,
    }


def enclosure_from_json(d: dict) -> Enclosure:
    if "lo_exact" in d:
        return Enclosure(decode_mpfr(d["lo_exact"], d["bits"]), decode_mpfr(d["hi_exact"], d["bits"]))
    return Enclosure(float(d["lo"]), float(d["hi"]))


def janssen_sum(n, lattice: RectLattice, strategy: TailStrategy = DEFAULT_STRATEGY,
                prec: PrecisionConfig = CERTIFIED) -> JanssenReport:
    """Janssen-test sum over the adjoint of ``lattice`` with a certified tail."""
    n = _order(n)
    fin = finite_part(n, lattice, strategy.cutoff, prec)
    tail = tail_bound(n, lattice, strategy, prec)
    if not prec.certified:
        total = fin.hi + tail.hi
        return JanssenReport(
            n, lattice, fin, tail.hi, total, Verdict.FAST_ESTIMATE,
            str(strategy.cutoff), "fast",
            (("certified", 0), ("tail_kind", strategy.kind.value)),
        )
    _, up = contexts(max(fin.bits, tail.bits))
    total = up.add(fin.hi, tail.hi)
    verdict = Verdict.FRAME_CERTIFIED if total < 2 else Verdict.INCONCLUSIVE
    ledger = (
        ("certified", 1),
        ("tail_kind", strategy.kind.value),
        ("bits", fin.bits),
        ("finite_width", round_up_float(fin.width)),
        ("tail_upper", round_up_float(tail.hi)),
        ("margin_below_2", float(2 - to_fraction(total))),
    )
    return JanssenReport(n, lattice, fin, tail.hi, total, verdict,
                         str(strategy.cutoff), "certified", ledger)


def clear_caches() -> None:
    """Drop memoised finite parts and tails (used before timing runs)."""
    point_groups.cache_clear()
    finite_part.cache_clear()
    _tail.cache_clear()
    _fast_tail.cache_clear()


def upper_frame_bound_estimate(report: JanssenReport):
    """density * total_upper, an upper frame bound for the Gabor system."""
    if report.mode == "fast":
        return math.sqrt(float(report.lattice.density_squared)) * report.total_upper
    dens = report.lattice.density(max(128, report.total_upper.precision))
    return (dens * Enclosure.exact(report.total_upper, dens.bits)).hi


# ---------------------------------------------------------------------------
# signed sums and the first Hermite function


def _square_delta(delta) -> Fraction:
    d = Fraction(delta)
    if d <= 0:
        raise DomainError("density must be positive")
    return d


def signed_lattice_sum(n, delta, cutoff: MaxNorm = MaxNorm(5),
                       prec: PrecisionConfig = CERTIFIED) -> tuple[Enclosure, Enclosure]:
    """Signed sum of V over the adjoint of the square lattice of density delta.

    The absolute tail bound is added to both parts as a symmetric radius.
    """
    n = _order(n)
    d = _square_delta(delta)
    lattice = RectLattice.square(d)
    groups: dict[tuple[int, Fraction], int] = {}
    M = cutoff.M
    for k in range(-M, M + 1):
        for l in range(-M, M + 1):
            key = (k * k + l * l, (d * k * l) % 2)
            groups[key] = groups.get(key, 0) + 1

    def compute(bits: int) -> tuple[Enclosure, Enclosure]:
        re = Enclosure.exact(0, bits)
        im = Enclosure.exact(0, bits)
        for (m, phase), count in sorted(groups.items()):
            if m == 0:
                val = Enclosure.exact(1, bits)
            else:
                x = pi(bits) * (d * m)
                val = laguerre_enclosure(n, x) * (-x / 2).exp()
            re = re + val * cospi(phase, bits) * count
            im = im - val * sinpi(phase, bits) * count
        t = _tail(n, lattice, TailStrategy(TailKind.CRUDE_POWER_GEO, cutoff), bits,
                  prec.target_width).hi
        pad = Enclosure(contexts(bits)[0].minus(t), t)
        return re + pad, im + pad

    bits = prec.bits
    while True:
        re, im = compute(bits)
        if max(re.width, im.width) <= prec.target_width or bits * 2 > prec.max_bits:
            return re, im
        bits *= 2


def j1(delta, prec: PrecisionConfig = CERTIFIED, cutoff: MaxNorm = MaxNorm(5)) -> Enclosure:
    """Janssen sum for the first Hermite function on the square lattice of density delta."""
    d = _square_delta(delta)
    if d < 1:
        raise DomainError("j1 is defined for delta >= 1")
    rep = janssen_sum(1, RectLattice.square(d), TailStrategy.for_cutoff(cutoff), prec)
    if not prec.certified:
        return Enclosure.point(rep.total_upper)
    return Enclosure(rep.finite_part.lo, rep.total_upper)


def j1_derivative(delta, prec: PrecisionConfig = CERTIFIED,
                  cutoff: MaxNorm = MaxNorm(5)) -> Enclosure:
    """d/d(delta) of j1: (pi/2) sum (k^2+l^2)(3 - pi delta (k^2+l^2)) e^(-pi delta (k^2+l^2)/2)."""
    d = _square_delta(delta)
    if d < 1:
        raise DomainError("j1 is defined for delta >= 1")
    M = cutoff.M
    counts: dict[int, int] = {}
    for k in range(-M, M + 1):
        for l in range(-M, M + 1):
            m = k * k + l * l
            if m:
                counts[m] = counts.get(m, 0) + 1

    def finite(bits: int) -> Enclosure:
        p = pi(bits)
        total = Enclosure.exact(0, bits)
        for m, c in sorted(counts.items()):
            x = p * (d * m)
            total = total + (3 - x) * (-x / 2).exp() * (m * c)
        return total * p / 2

    if not prec.certified:
        return Enclosure.point(float(finite(64).mid))
    total = refine(finite, prec)
    bits = total.bits
    # outside the box m >= (M+1)^2 and |term| <= (pi/2) r2(m) m (pi d m) e^(-pi d m/2)
    p = pi(bits)
    q = (-(p * d) / 2).exp()
    tail = power_geometric_tail(3, q, (M + 1) ** 2, target_width=prec.target_width,
                                bits=bits) * (p * p * 2 * d)
    return total + Enclosure(contexts(bits)[0].minus(tail.hi), tail.hi)
