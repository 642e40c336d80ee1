"""A non-archimedean quasi-metric whose balls are the minimal neighbourhoods.

``rho(x, y) = 2**-m`` where ``m`` is the first level whose minimal
neighbourhood of ``x`` misses ``y``. Because each level is interior-preserving
and the balls are intersections over all levels so far, ``z in ball(x, n)``
forces ``ball(z, n) <= ball(x, n)``, which is the strong triangle inequality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Optional

from .cover import FourCover, basic_set
from .decompose import Decomposition, synthesize_decomposition
from .errors import BoundExhausted, LabelError
from .exactsets import INF, RSet, fmt
from .exactsets.numbers import floor_log2_inverse
from .qbase import RATIONALS, FamilyDescriptor, Span, family_span, level_descriptors
from .rng import SplitMix64
from .settings import max_level


@total_ordering
@dataclass(frozen=True)
class DyadicDistance:
    """``0`` when ``exponent`` is None, otherwise ``2**-exponent``."""

    exponent: Optional[int]

    @property
    def value(self) -> Fraction:
        return Fraction(0) if self.exponent is None else Fraction(1, 2**self.exponent)

    def __lt__(self, other: "DyadicDistance") -> bool:
        return self.value < other.value

    def text(self) -> str:
        return "0" if self.exponent is None else f"2^-{self.exponent}"

    __str__ = text


ZERO = DyadicDistance(None)


@dataclass(frozen=True)
class ExtractorParams:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 0 or self.n < 0:
            raise ValueError("k and n must be non-negative")


@dataclass
class AxiomReport:
    checked: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class QuasiMetric:
    """Distances, balls and the extractor for one cover and decomposition."""

    def __init__(self, cover: FourCover, decomposition: Optional[Decomposition] = None):
        self.cover = cover
        self.dec = decomposition if decomposition is not None else synthesize_decomposition(cover)
        self._levels: dict[Fraction, list[Span]] = {}
        self._balls: dict[Fraction, list[Span]] = {}

    # -- levels and balls ---------------------------------------------------

    def level_span(self, level: int, x) -> Span:
        x = Fraction(x)
        spans = self._levels.setdefault(x, [])
        while len(spans) <= level:
            spans.append(self._compute_level(len(spans), x))
        return spans[level]

    def _compute_level(self, level: int, x: Fraction) -> Span:
        out = Span.real()
        for f in level_descriptors(level, x):
            out = out.meet(family_span(self.cover, self.dec, f, x))
        return out

    def ball_span(self, x, n: int) -> Span:
        x = Fraction(x)
        balls = self._balls.setdefault(x, [])
        while len(balls) <= n:
            lev = self.level_span(len(balls), x)
            balls.append(lev if not balls else balls[-1].meet(lev))
        return balls[n]

    def ball(self, x, n: int) -> RSet:
        """``{y : rho(x, y) < 2**-n}``."""
        return self.ball_span(x, n).to_rset()

    # -- distance -----------------------------------------------------------

    def witness_level(self, x, y) -> int:
        """A level whose neighbourhood of ``x`` provably misses ``y``."""
        x, y = Fraction(x), Fraction(y)
        if x == y:
            raise ValueError("witness_level needs distinct points")
        lab = self.cover.label_of(x)
        if lab == 2:
            return 0
        # the grid cell around x has width at most |y - x| from this level on
        bound = 1 + floor_log2_inverse(abs(y - x))
        if lab == 3 and y < x:
            i = self.dec.index_F(x, limit=bound)
            if i is not None:
                bound = min(bound, i + 1)
        elif lab == 4 and y > x:
            i = self.dec.index_H(x, limit=bound)
            if i is not None:
                bound = min(bound, i + 1)
        return bound

    def separating_level(self, x, y) -> Optional[int]:
        x, y = Fraction(x), Fraction(y)
        if x == y:
            return None
        for level in range(self.witness_level(x, y) + 1):
            if y not in self.level_span(level, x):
                return level
        raise AssertionError(f"witness level failed for {fmt(x)}, {fmt(y)}")

    def qdist(self, x, y) -> DyadicDistance:
        level = self.separating_level(x, y)
        return ZERO if level is None else DyadicDistance(level)

    def qdist_witness(self, x, y) -> tuple[DyadicDistance, Optional[FamilyDescriptor]]:
        """The distance and the family whose minimum first excludes ``y``."""
        x, y = Fraction(x), Fraction(y)
        level = self.separating_level(x, y)
        if level is None:
            return ZERO, None
        for f in level_descriptors(level, x):
            if y not in family_span(self.cover, self.dec, f, x):
                return DyadicDistance(level), f
        raise AssertionError("level excludes y but no family does")

    # -- axioms -------------------------------------------------------------

    def check_axioms(self, seed: int, count: int, pool: Optional[list] = None) -> AxiomReport:
        from .sampling import sample_triples

        report = AxiomReport()
        for x, y, z in sample_triples(self.cover, SplitMix64(seed), count, pool):
            report.checked += 1
            dxy, dxz, dzy = self.qdist(x, y), self.qdist(x, z), self.qdist(z, y)
            if (dxy.value == 0) != (x == y):
                report.violations.append({"check": "identity", "x": fmt(x), "y": fmt(y), "rho": dxy.text()})
            if dxy > max(dxz, dzy):
                report.violations.append(
                    {
                        "check": "ultrametric",
                        "x": fmt(x),
                        "y": fmt(y),
                        "z": fmt(z),
                        "rho_xy": dxy.text(),
                        "rho_xz": dxz.text(),
                        "rho_zy": dzy.text(),
                    }
                )
        return report

    # -- agreement with the hybrid topology ---------------------------------

    def ball_inside_basic(self, x, k: int, max_n: Optional[int] = None) -> Optional[int]:
        """Least ``n`` with ``ball(x, n)`` inside the basic neighbourhood of radius ``2**-k``."""
        x = Fraction(x)
        max_n = max_level() if max_n is None else max_n
        nb = basic_set(self.cover.label_of(x), x, Fraction(1, 2**k))
        for n in range(max_n + 1):
            if self.ball(x, n).issubset(nb):
                return n
        return None

    def basic_inside_ball(self, x, n: int, max_k: Optional[int] = None) -> Optional[int]:
        """Least ``k`` with the basic neighbourhood of radius ``2**-k`` inside ``ball(x, n)``."""
        x = Fraction(x)
        max_k = max_level() if max_k is None else max_k
        lab = self.cover.label_of(x)
        B = self.ball(x, n)
        for k in range(max_k + 1):
            if basic_set(lab, x, Fraction(1, 2**k)).issubset(B):
                return k
        return None

    # -- extractor ----------------------------------------------------------

    def _right_exponent(self, x: Fraction, n: int) -> Optional[int]:
        """``m(x, n)``: least ``i`` with ``[x, x + 2**-i)`` inside the ball."""
        s = self.ball_span(x, n)
        if s.hi == INF:
            return 0
        gap = s.hi - x
        if gap <= 0:
            return None
        return floor_log2_inverse(gap)

    def j_index(self, x, n: int) -> Optional[int]:
        m = self._right_exponent(Fraction(x), n)
        return None if m is None else max(n, m)

    def _left_closed(self, x: Fraction, n: int) -> bool:
        s = self.ball_span(x, n)
        return s.lo > x or (s.lo == x and s.lo_closed)

    def _window(self, x: Fraction, n: int) -> Optional[Fraction]:
        """Right end of ``D_{n+1}(x)`` when the first condition holds, else None."""
        if not self._left_closed(x, n):
            return None
        j = self.j_index(x, n + 1)
        if j is None:
            return None
        return x + Fraction(1, 2**j)

    def in_extractor_set(self, p: ExtractorParams, y) -> bool:
        """Membership of an arbitrary point in ``F_{k,n}`` (false off the right half-open region)."""
        y = Fraction(y)
        if self.cover.label_of(y) != 3:
            return False
        hi = self._window(y, p.n)
        if hi is None:
            return False
        return any(y < q < hi for q in RATIONALS.prefix(p.k))

    def extractor_member(self, p: ExtractorParams, x) -> bool:
        x = Fraction(x)
        if self.cover.label_of(x) != 3:
            raise LabelError(f"{fmt(x)} has label {self.cover.label_of(x)}, not 3")
        return self.in_extractor_set(p, x)

    def extractor_cover(self, x, bound: int) -> tuple[int, int]:
        """Lexicographically least ``(k, n)`` with ``x`` in ``F_{k,n}``, both at most ``bound``."""
        x = Fraction(x)
        if self.cover.label_of(x) != 3:
            raise LabelError(f"{fmt(x)} has label {self.cover.label_of(x)}, not 3")
        qs = RATIONALS.prefix(bound)
        best = None
        for n in range(bound + 1):
            hi = self._window(x, n)
            if hi is None:
                continue
            k = next((i for i, q in enumerate(qs) if x < q < hi), None)
            if k is not None and (best is None or k < best[0]):
                best = (k, n)
        if best is None:
            raise BoundExhausted(f"no (k, n) <= {bound} covers {fmt(x)}")
        return best


class CorruptQuasiMetric(QuasiMetric):
    """Negative control: symmetric balls of radius ``2**-level``, which are not nested kernels."""

    def _compute_level(self, level: int, x: Fraction) -> Span:
        r = Fraction(1, 2**level)
        return Span(x - r, x + r, False, False)

    def ball_span(self, x, n: int) -> Span:
        return self.level_span(n, x)

    def witness_level(self, x, y) -> int:
        return floor_log2_inverse(abs(Fraction(y) - Fraction(x)))
