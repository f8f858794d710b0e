"""Modular arithmetic for grid-number-one diagrams K(p, q, h) in L(p, q).

Every quantity here is an exact integer or a ``Fraction``.  Lengths are
expressed as fractions of a full Reeb orbit, and angles as fractions of a
full turn (so ``Fraction(1, 2)`` means pi).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Literal

from .exceptions import SpecError

Kind = Literal["A", "B"]


@dataclass(frozen=True)
class LensParams:
    """The lens space L(p, q)."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if not (0 < self.q < self.p):
            raise SpecError(f"need 0 < q < p, got p={self.p}, q={self.q}")
        if gcd(self.p, self.q) != 1:
            raise SpecError(f"gcd(p, q) must be 1, got p={self.p}, q={self.q}")
        if self.q == 1:
            raise SpecError("q=1 unsupported")

    @property
    def k(self) -> int:
        return cover_order(self.p, self.q)


@dataclass(frozen=True)
class GridOneSpec:
    """A normalized grid-number-one diagram.

    Build instances with :meth:`from_pqs`, which derives ``h``, ``v`` and
    ``k``; the constructor only validates.
    """

    lens: LensParams
    h: int
    v: int
    k: int

    def __post_init__(self) -> None:
        p, q = self.lens.p, self.lens.q
        if not (0 < self.h < p and 0 < self.v < p):
            raise SpecError(f"h and v must lie in (0, p), got h={self.h}, v={self.v}")
        if (self.h + self.v * q) % p != 0:
            raise SpecError(f"h + v*q must vanish mod p (h={self.h}, v={self.v})")
        if self.h + self.v > p:
            raise SpecError(f"h + v must be at most p (h={self.h}, v={self.v})")
        if self.k != gcd(q - 1, p):
            raise SpecError(f"k must equal gcd(q-1, p), got {self.k}")

    @classmethod
    def from_pqs(cls, p: int, q: int, s: int) -> GridOneSpec:
        """Validate (p, q), normalize the separation ``s`` and derive v, k."""
        lens = LensParams(p, q)
        h = normalize_h(p, q, s)
        return cls(lens, h, vertical_length(p, q, h), cover_order(p, q))

    @property
    def p(self) -> int:
        return self.lens.p

    @property
    def q(self) -> int:
        return self.lens.q

    @property
    def segments(self) -> int:
        """h + v, the number of front segments per period."""
        return self.h + self.v

    def label(self) -> str:
        return f"K({self.p},{self.q},{self.h})"


def vertical_length(p: int, q: int, s: int) -> int:
    """The unique v in (0, p) with s + v*q = 0 mod p."""
    if s % p == 0:
        raise SpecError("s = 0 mod p puts both basepoints in one box")
    if gcd(p, q) != 1:
        raise SpecError(f"gcd(p, q) must be 1, got p={p}, q={q}")
    return (-s * pow(q, -1, p)) % p


def normalize_h(p: int, q: int, s: int) -> int:
    """Pick the separation among s, p - s whose front satisfies h + v <= p.

    When s + v(s) = p both choices qualify and the smaller one is returned.
    """
    s %= p
    total = s + vertical_length(p, q, s)
    if total < p:
        return s
    if total == p:
        return min(s, p - s)
    return p - s


def cover_order(p: int, q: int) -> int:
    return gcd(q - 1, p)


def is_primitive(spec: GridOneSpec) -> bool:
    return gcd(spec.h, spec.p) == 1


def crossing_count(spec: GridOneSpec) -> int:
    """|{x < h : k | x}| + |{y <= v : k | y}|."""
    return (spec.h - 1) // spec.k + spec.v // spec.k


def box_label(spec: GridOneSpec, j: int, s_total: int) -> int:
    """Box of the j-th crossing, counted top-down."""
    if not 1 <= j <= s_total:
        raise ValueError(f"crossing index {j} outside 1..{s_total}")
    k = spec.k
    if j * k <= spec.h:
        return k * j
    return (-spec.q * k * (s_total + 1 - j)) % spec.p


def chord_steps(spec: GridOneSpec, j: int) -> int:
    """Least positive x with B(j) + (1 - q) x = 0 mod p."""
    p, q = spec.p, spec.q
    b = box_label(spec, j, crossing_count(spec))
    for x in range(1, p // spec.k + 1):
        if (b + (1 - q) * x) % p == 0:
            return x
    raise AssertionError(f"no chord for box {b} in {spec.label()}")


def chord_length(spec: GridOneSpec, j: int, kind: Kind) -> Fraction:
    """Length of a_j or b_j as a fraction of the Reeb orbit."""
    a = Fraction(spec.k * chord_steps(spec, j), spec.p)
    if kind == "A":
        return a
    if kind == "B":
        return 1 - a
    raise ValueError(f"kind must be 'A' or 'B', got {kind!r}")


def phi_of_theta(lens: LensParams, theta1: Fraction, theta2: Fraction) -> Fraction:
    """Front angles to the Lagrangian longitude, all in units of a full turn."""
    return (Fraction(lens.p, lens.k) * (Fraction(theta1) - Fraction(theta2))) % 1
