"""The sigma-interior-preserving base behind the quasi-metric.

Four kinds of families are used:

* ``D``       singletons of isolated points,
* ``W(p,q)``  the single open interval ``(p, q)``,
* ``U(q,n)``  ``{[y, q) : y in F(n), y < q}``,
* ``V(q,n)``  ``{(q, y] : y in H(n), q < y}``.

Level ``0`` holds ``D`` alone. Level ``l >= 1`` holds every ``W``, ``U`` and
``V`` family whose rational parameters lie on the dyadic grid of step
``2**-(l-1)``, with ``n = l - 1``. Each level is interior-preserving, so the
minimal neighbourhood of a point at a level is the intersection of at most
three family minima, and nesting the levels turns that intersection into a
ball of the quasi-metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Union

from .cover import FourCover
from .decompose import Decomposition
from .errors import SearchExhausted
from .exactsets import INF, NINF, RSet, fmt

# ---------------------------------------------------------------------------
# enumeration of the rationals


def fusc(n: int) -> int:
    """Stern's diatomic sequence."""
    a, b = 1, 0
    while n:
        if n & 1:
            b += a
        else:
            a += b
        n >>= 1
    return b


def calkin_wilf(m: int) -> Fraction:
    """m-th positive rational of the Calkin-Wilf sequence, ``m >= 1``."""
    if m < 1:
        raise ValueError("Calkin-Wilf positions start at 1")
    return Fraction(fusc(m), fusc(m + 1))


def calkin_wilf_successor(x: Fraction) -> Fraction:
    return 1 / (2 * math.floor(x) - x + 1)


def calkin_wilf_position(x: Fraction) -> int:
    if x <= 0:
        raise ValueError("only positive rationals have a Calkin-Wilf position")
    p, q = x.numerator, x.denominator
    bits = []
    while (p, q) != (1, 1):
        if p < q:
            bits.append(0)
            q -= p
        else:
            bits.append(1)
            p -= q
    m = 1
    for b in reversed(bits):
        m = 2 * m + b
    return m


class RationalEnum:
    """Bijection from the naturals onto the rationals: 0, 1, -1, 1/2, -1/2, 2, -2, ..."""

    def __init__(self):
        self._cache: list[Fraction] = []

    def __call__(self, i: int) -> Fraction:
        if i < 0:
            raise ValueError("index must be non-negative")
        if i < len(self._cache):
            return self._cache[i]
        if i == 0:
            return Fraction(0)
        m, odd = (i + 1) // 2, i % 2
        v = calkin_wilf(m)
        return v if odd else -v

    def prefix(self, k: int) -> list[Fraction]:
        """``[q(0), ..., q(k)]``."""
        while len(self._cache) <= k:
            self._cache.append(self(len(self._cache)))
        return self._cache[: k + 1]

    @staticmethod
    def index(x) -> int:
        x = Fraction(x)
        if x == 0:
            return 0
        m = calkin_wilf_position(abs(x))
        return 2 * m - 1 if x > 0 else 2 * m


RATIONALS = RationalEnum()


# ---------------------------------------------------------------------------
# spans: intervals or singletons containing a centre


class Span(NamedTuple):
    lo: Union[Fraction, float]
    hi: Union[Fraction, float]
    lo_closed: bool
    hi_closed: bool

    @classmethod
    def real(cls) -> "Span":
        return cls(NINF, INF, False, False)

    @classmethod
    def point(cls, x: Fraction) -> "Span":
        return cls(x, x, True, True)

    def __contains__(self, y) -> bool:
        if y < self.lo or y > self.hi:
            return False
        if y == self.lo and not self.lo_closed:
            return False
        if y == self.hi and not self.hi_closed:
            return False
        return True

    def meet(self, other: "Span") -> "Span":
        if other.lo > self.lo:
            lo, lc = other.lo, other.lo_closed
        elif other.lo < self.lo:
            lo, lc = self.lo, self.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if other.hi < self.hi:
            hi, hc = other.hi, other.hi_closed
        elif other.hi > self.hi:
            hi, hc = self.hi, self.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Span(lo, hi, lc, hc)

    def is_real(self) -> bool:
        return self.lo == NINF and self.hi == INF

    def to_rset(self) -> RSet:
        return RSet.interval(self.lo, self.hi, self.lo_closed, self.hi_closed)

    def text(self) -> str:
        if self.lo == self.hi:
            return "{" + fmt(self.lo) + "}"
        return self.to_rset().text()


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FamilyDescriptor:
    kind: str  # "D", "W", "U", "V"
    p: Optional[Fraction] = None
    q: Optional[Fraction] = None
    n: Optional[int] = None

    def text(self) -> str:
        if self.kind == "D":
            return "D"
        if self.kind == "W":
            return f"W({fmt(self.p)},{fmt(self.q)})"
        return f"{self.kind}({fmt(self.q)},{self.n})"

    __str__ = text


def D() -> FamilyDescriptor:
    return FamilyDescriptor("D")


def W(p, q) -> FamilyDescriptor:
    return FamilyDescriptor("W", p=Fraction(p), q=Fraction(q))


def U(q, n: int) -> FamilyDescriptor:
    return FamilyDescriptor("U", q=Fraction(q), n=n)


def V(q, n: int) -> FamilyDescriptor:
    return FamilyDescriptor("V", q=Fraction(q), n=n)


def family_span(cover: FourCover, dec: Decomposition, f: FamilyDescriptor, x: Fraction) -> Span:
    """Intersection of the members of ``f`` containing ``x`` (the whole line if none do)."""
    if f.kind == "D":
        return Span.point(x) if cover.label_of(x) == 2 else Span.real()
    if f.kind == "W":
        if f.p < x < f.q:
            return Span(f.p, f.q, False, False)
        return Span.real()
    if f.kind == "U":
        if x < f.q:
            s = dec.F(f.n).sup_below(x)
            if s.nonempty:
                return Span(s.value, f.q, True, False)
        return Span.real()
    if f.kind == "V":
        if x > f.q:
            s = dec.H(f.n).inf_above(x)
            if s.nonempty:
                return Span(f.q, s.value, False, True)
        return Span.real()
    raise ValueError(f"unknown family kind {f.kind!r}")


def min_nbhd_family(cover: FourCover, dec: Decomposition, f: FamilyDescriptor, x) -> RSet:
    return family_span(cover, dec, f, Fraction(x)).to_rset()


def grid_step(level: int) -> Fraction:
    return Fraction(1, 2 ** (level - 1))


def grid_neighbours(x: Fraction, level: int) -> tuple[Fraction, Fraction]:
    """Largest grid point below ``x`` and smallest above, at step ``2**-(level-1)``."""
    h = grid_step(level)
    t = x / h
    return (math.ceil(t) - 1) * h, (math.floor(t) + 1) * h


def level_descriptors(level: int, x) -> list[FamilyDescriptor]:
    """The families of a level whose minima can differ from the whole line at ``x``."""
    if level == 0:
        return [D()]
    p, q = grid_neighbours(Fraction(x), level)
    return [W(p, q), U(q, level - 1), V(p, level - 1)]


def level_span(cover: FourCover, dec: Decomposition, level: int, x: Fraction) -> Span:
    out = Span.real()
    for f in level_descriptors(level, x):
        out = out.meet(family_span(cover, dec, f, x))
    return out


def min_nbhd_level(cover: FourCover, dec: Decomposition, n: int, x) -> RSet:
    """Intersection over levels ``0..n`` of the minimal neighbourhoods, as an RSet."""
    x = Fraction(x)
    out = RSet.real()
    for level in range(n + 1):
        for f in level_descriptors(level, x):
            out = out & min_nbhd_family(cover, dec, f, x)
    return out


# ---------------------------------------------------------------------------


@dataclass
class InteriorReport:
    family: FamilyDescriptor
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_interior_preserving(cover: FourCover, dec: Decomposition, f: FamilyDescriptor, probes, max_k: Optional[int] = None) -> InteriorReport:
    """Certify that the minimal member-intersection at each probe is open.

    For ``U`` families the closed left end must admit a right half-open
    neighbourhood, for ``V`` families the closed right end a left half-open
    one; the probe itself is checked as well.
    """
    failures = []
    for x0 in probes:
        x0 = Fraction(x0)
        span = family_span(cover, dec, f, x0)
        if span.is_real():
            continue
        S = span.to_rset()
        points = [x0]
        if f.kind == "U" and span.lo != x0:
            points.append(span.lo)
        if f.kind == "V" and span.hi != x0:
            points.append(span.hi)
        for pt in points:
            try:
                cover.is_open_sampled(S, [pt], max_k=max_k)
            except SearchExhausted:
                failures.append({"probe": fmt(x0), "endpoint": fmt(pt), "label": cover.label_of(pt), "set": S.text()})
    return InteriorReport(f, failures)
