"""Witness families for quasi-metrizability, G-delta certificates, classification.

A decomposition gives, for every level ``n``, a subset ``F(n)`` of the
right half-open region whose left-Sorgenfrey closure stays inside the
isolated or right half-open regions, and dually ``H(n)`` for the left
half-open region. Together the levels exhaust both regions.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .cover import FourCover
from .errors import NotOneSideClosed
from .exactsets import INF, NINF, SLEFT, SRIGHT, Interval, RSet, fmt, union_all
from .exactsets.numbers import height

Rule = Callable[[int], RSet]


def _core(iv: Interval, n: int) -> tuple[RSet, Fraction]:
    """Closed shrinking core of one interval and the matching gap width."""
    bounded = iv.lo != NINF and iv.hi != INF
    eta = (iv.hi - iv.lo) / 2 ** (n + 2) if bounded else Fraction(1, 2 ** (n + 2))
    if iv.lo == NINF and iv.hi == INF:
        return RSet.closed(-n, n), eta
    if iv.lo == NINF:
        hi = iv.hi if iv.hi_closed else iv.hi - eta
        return RSet.closed(hi - n - 1, hi), eta
    lo = iv.lo if iv.lo_closed else iv.lo + eta
    if iv.hi == INF:
        return RSet.closed(lo, lo + n + 1), eta
    hi = iv.hi if iv.hi_closed else iv.hi - eta
    return RSet.closed(lo, hi), eta


def right_family_level(a3: RSet, a2: RSet, n: int) -> RSet:
    """Level ``n`` of an exhausting family of subsets of ``a3`` whose
    left-Sorgenfrey closures stay in ``a2 | a3``."""
    pieces = []
    for iv in a3.intervals:
        core, eta = _core(iv, n)
        span = RSet((iv,))
        # carved points that are neither in a3 nor isolated must not be
        # approached from the left
        bad = (span - a3) - a2
        gaps = []
        keep = []
        for x in bad.points_plus:
            gaps.append(Interval(x - eta, x, False, True))
        for g in bad.gens_plus:
            gaps.append(Interval(g.a - eta, g.a + eta))
            for _, p in g.points(g.tail_start(eta)):
                gaps.append(Interval(p - eta, p, False, True))
            if core.member(g.a) and a3.member(g.a):
                keep.append(g.a)
        pieces.append((core - RSet.union_of_intervals(gaps)) | RSet.points(keep))
    isolated = list(a3.points_plus)
    for g in a3.gens_plus:
        isolated.extend(p for _, p in g.points(g.k0 + n + 1))
    pieces.append(RSet.points(isolated))
    return union_all(pieces) & a3


class Decomposition:
    """Lazily evaluated families ``F(n)`` and ``H(n)`` with per-level caching."""

    def __init__(self, cover: FourCover, F_rule: Rule, H_rule: Rule, name: str = "synthesized"):
        self.cover = cover
        self._F_rule = F_rule
        self._H_rule = H_rule
        self._F: dict[int, RSet] = {}
        self._H: dict[int, RSet] = {}
        self.name = name

    def F(self, n: int) -> RSet:
        if n not in self._F:
            self._F[n] = self._F_rule(n)
        return self._F[n]

    def H(self, n: int) -> RSet:
        if n not in self._H:
            self._H[n] = self._H_rule(n)
        return self._H[n]

    def index_F(self, x, limit: int = 4096) -> Optional[int]:
        """First level whose ``F`` contains ``x``."""
        x = Fraction(x)
        for n in range(limit + 1):
            if self.F(n).member(x):
                return n
        return None

    def index_H(self, x, limit: int = 4096) -> Optional[int]:
        x = Fraction(x)
        for n in range(limit + 1):
            if self.H(n).member(x):
                return n
        return None


def synthesize_decomposition(cover: FourCover) -> Decomposition:
    a2, a3, a4 = cover.region(2), cover.region(3), cover.region(4)
    na2, na4 = a2.negate(), a4.negate()

    def F(n):
        return right_family_level(a3, a2, n)

    def H(n):
        return right_family_level(na4, na2, n).negate()

    return Decomposition(cover, F, H)


# ---------------------------------------------------------------------------


@dataclass
class Violation:
    n: int
    family: str
    kind: str
    witness: Fraction

    def as_dict(self):
        return {"n": self.n, "family": self.family, "kind": self.kind, "witness": fmt(self.witness)}


@dataclass
class DecompositionReport:
    n_max: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None


def validate_decomposition(cover: FourCover, D: Decomposition, n_max: int, stop_at_first: bool = True) -> DecompositionReport:
    report = DecompositionReport(n_max)
    a2 = cover.region(2)
    checks = (
        ("F", D.F, cover.region(3), SLEFT),
        ("H", D.H, cover.region(4), SRIGHT),
    )
    for n in range(n_max + 1):
        for fam, rule, region, top in checks:
            level = rule(n)
            outside = level - region
            if not outside.is_empty():
                report.violations.append(Violation(n, fam, "not-subset", outside.sample_point()))
            else:
                leak = level.closure(top) - (region | a2)
                if not leak.is_empty():
                    report.violations.append(Violation(n, fam, "closure-leak", leak.sample_point()))
            if report.violations and stop_at_first:
                return report
    return report


# ---------------------------------------------------------------------------
# G-delta representation of one-side-closed sets


def iter_by_height(S: RSet) -> Iterator[Fraction]:
    """Points of a countable set ordered by ``|numerator| + denominator``, ties by value."""
    if not S.is_countable():
        raise ValueError("set is uncountable")
    heap = [(height(p), p) for p in S.points_plus]
    heapq.heapify(heap)
    streams = []
    for g in S.gens_plus:
        # height of term k is at least q**k / (|num c| * den a)
        q = g.r.denominator
        scale = abs(g.c.numerator) * g.a.denominator
        streams.append([g, g.k0, q, scale])

    def bound(s):
        g, k, q, scale = s
        return Fraction(q**k, scale)

    while heap or streams:
        while streams:
            s = min(streams, key=bound)
            if heap and bound(s) > heap[0][0]:
                break
            g, k = s[0], s[1]
            p = g.point(k)
            heapq.heappush(heap, (height(p), p))
            s[1] += 1
        yield heapq.heappop(heap)[1]


def inflate(H: RSet, eps: Fraction) -> RSet:
    """Open ``eps``-neighbourhood of a set closed in the real line."""
    parts = []
    for iv in H.intervals:
        parts.append(RSet.open(iv.lo - eps if iv.lo != NINF else NINF, iv.hi + eps if iv.hi != INF else INF))
    for p in H.points_plus:
        parts.append(RSet.open(p - eps, p + eps))
    for g in H.gens_plus:
        k = g.tail_start(eps)
        for _, p in g.points(k):
            parts.append(RSet.open(p - eps, p + eps))
        # the remaining terms lie within eps of the limit and their balls chain together
        first = g.point(k)
        parts.append(RSet.open(min(g.a, first) - eps, max(g.a, first) + eps))
    return union_all(parts)


@dataclass
class GdeltaCertificate:
    F: RSet
    side: str
    H_closure: RSet
    defect: RSet
    _defects: list = field(default_factory=list, repr=False)
    _it: Optional[Iterator] = field(default=None, repr=False)

    def defect_points(self, n: int) -> list[Fraction]:
        """The first ``n`` defect points in height order."""
        if self._it is None:
            self._it = iter_by_height(self.defect)
        while len(self._defects) < n:
            try:
                self._defects.append(next(self._it))
            except StopIteration:
                break
        return self._defects[:n]

    def defect_index(self, x, limit: int = 10_000) -> Optional[int]:
        x = Fraction(x)
        if not self.defect.member(x):
            return None
        for i in range(limit):
            pts = self.defect_points(i + 1)
            if len(pts) <= i:
                return None
            if pts[i] == x:
                return i
        return None

    def open_family(self, n: int) -> RSet:
        return inflate(self.H_closure, Fraction(1, 2**n)) - RSet.points(self.defect_points(n))

    def gap_index(self, x) -> int:
        """Least j >= 1 with the one-sided ``1/j`` window at a defect point missing ``F``."""
        x = Fraction(x)
        if not self.defect.member(x):
            raise ValueError(f"{fmt(x)} is not a defect point")
        if self.side == SLEFT:
            v = self.F.sup_below(x)
            d = x - v.value if v.nonempty else None
        else:
            v = self.F.inf_above(x)
            d = v.value - x if v.nonempty else None
        if d is None:
            return 1
        return max(1, math.ceil(1 / d))


def gdelta_extract(F: RSet, side: str) -> GdeltaCertificate:
    if side not in (SRIGHT, SLEFT):
        raise ValueError("side must be Sright or Sleft")
    if not F.is_closed(side):
        raise NotOneSideClosed(f"{F.text()} is not closed in {side}")
    H = F.closure("R")
    defect = H - F
    if not defect.is_countable():
        raise AssertionError("defect of a one-side-closed set must be countable")
    return GdeltaCertificate(F, side, H, defect)


# ---------------------------------------------------------------------------


@dataclass
class Verdict:
    quasi_metrizable: bool
    witness: Decomposition
    metrizable_sufficient: bool
    second_countable: Optional[bool]
    a2_empty: bool

    def as_dict(self):
        return {
            "quasi_metrizable": self.quasi_metrizable,
            "non_archimedean": self.quasi_metrizable,
            "metrizable_sufficient": self.metrizable_sufficient,
            "second_countable": self.second_countable,
            "a2_empty": self.a2_empty,
        }


def classify(cover: FourCover) -> Verdict:
    a2, a3, a4 = cover.region(2), cover.region(3), cover.region(4)
    # every representable set is F-sigma in R, so the countability of the
    # one-sided regions decides the metrizability criterion
    metr = (a3 | a4).is_countable()
    second = (a2 | a3 | a4).is_countable() if a2.is_countable() else None
    return Verdict(True, synthesize_decomposition(cover), metr, second, a2.is_empty())
