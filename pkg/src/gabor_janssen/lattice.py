"""Rectangular lattices, layers and sums of two squares.

Steps are stored as exact rational squares, so a step of ``1/sqrt(delta)``
with rational ``delta`` is represented exactly and squared norms of lattice
points are exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .intervals import Enclosure


def _positive_fraction(x, name: str) -> Fraction:
    try:
        f = Fraction(x)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} must be a rational number, got {x!r}") from exc
    if f <= 0:
        raise DomainError(f"{name} must be positive, got {x!r}")
    return f


@dataclass(frozen=True, slots=True)
class RectLattice:
    """The lattice a Z x b Z, given through ``a2 = a**2`` and ``b2 = b**2``."""

    a2: Fraction
    b2: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a2", _positive_fraction(self.a2, "a^2"))
        object.__setattr__(self, "b2", _positive_fraction(self.b2, "b^2"))

    @classmethod
    def square(cls, delta) -> "RectLattice":
        """(1/sqrt(delta)) Z^2, the square lattice of density ``delta``."""
        d = _positive_fraction(delta, "density")
        return cls(1 / d, 1 / d)

    @classmethod
    def from_steps(cls, a, b) -> "RectLattice":
        """Lattice with rational steps ``a`` and ``b`` (decimal strings are exact)."""
        a, b = _positive_fraction(a, "a"), _positive_fraction(b, "b")
        return cls(a * a, b * b)

    def adjoint(self) -> "RectLattice":
        return RectLattice(1 / self.a2, 1 / self.b2)

    @property
    def is_square(self) -> bool:
        return self.a2 == self.b2

    @property
    def density_squared(self) -> Fraction:
        return 1 / (self.a2 * self.b2)

    def density(self, bits: int = 128) -> Enclosure:
        """1/(a b) as a certified enclosure."""
        return Enclosure.exact(self.density_squared, bits).sqrt()

    def volume(self, bits: int = 128) -> Enclosure:
        return Enclosure.exact(self.a2 * self.b2, bits).sqrt()

    @property
    def a(self) -> float:
        return math.sqrt(self.a2)

    @property
    def b(self) -> float:
        return math.sqrt(self.b2)

    def swapped(self) -> "RectLattice":
        return RectLattice(self.b2, self.a2)

    def norm2(self, k: int, l: int) -> Fraction:
        """Exact squared Euclidean norm of the point (k a, l b)."""
        return k * k * self.a2 + l * l * self.b2


@dataclass(frozen=True, slots=True)
class LatticePoint:
    k: int
    l: int
    a: float
    b: float

    @property
    def coords(self) -> tuple[float, float]:
        return (self.k * self.a, self.l * self.b)


@dataclass(frozen=True, slots=True)
class Layer:
    """All (k, l) with k^2 + l^2 = m; ``count`` is r2(m)."""

    m: int
    count: int


@lru_cache(maxsize=65536)
def r2(m: int) -> int:
    """Number of ordered, signed representations of m as a sum of two squares."""
    if m < 0:
        raise DomainError("r2 is defined for m >= 0")
    if m == 0:
        return 1
    count = 0
    for k in range(math.isqrt(m) + 1):
        rest = m - k * k
        l = math.isqrt(rest)
        if l * l == rest:
            # (k, l) with sign choices; zeros contribute a single sign
            count += (2 if k else 1) * (2 if l else 1)
    return count


def enumerate_box(L: RectLattice, M: int) -> tuple[LatticePoint, ...]:
    """Points with max(|k|, |l|) <= M, k ascending then l ascending."""
    if M < 0:
        raise DomainError("M must be non-negative")
    a, b = L.a, L.b
    return tuple(
        LatticePoint(k, l, a, b)
        for k in range(-M, M + 1)
        for l in range(-M, M + 1)
    )


def layers_upto(R2: int) -> tuple[Layer, ...]:
    """Non-empty layers 1 <= m <= R2, ascending."""
    return tuple(Layer(m, c) for m in range(1, R2 + 1) if (c := r2(m)) > 0)


def layer_points(m: int) -> tuple[tuple[int, int], ...]:
    """Index pairs on layer m, row-major."""
    out = []
    root = math.isqrt(m)
    for k in range(-root, root + 1):
        rest = m - k * k
        l = math.isqrt(rest)
        if l * l == rest:
            out.extend([(k, -l), (k, l)] if l else [(k, 0)])
    return tuple(out)
