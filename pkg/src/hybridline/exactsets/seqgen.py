"""Geometric point sequences ``{a + c*r**k : k >= k0}`` converging to ``a``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from ..errors import NotCanonicalizable
from .numbers import ceil_div, coprime_basis, exponent_vector, ext_gcd, fmt

# Hard cap on how many leading terms a split may re-file as explicit points.
MAX_PREFIX = 200_000


@dataclass(frozen=True, order=True)
class SeqGen:
    a: Fraction
    c: Fraction
    r: Fraction
    k0: int = 0

    def __post_init__(self):
        for name in ("a", "c", "r"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, Fraction(v))
        if self.c == 0:
            raise ValueError("generator coefficient must be nonzero")
        if not (0 < self.r < 1):
            raise ValueError("generator ratio must lie in (0, 1)")
        if self.k0 < 0:
            raise ValueError("generator start index must be >= 0")

    @property
    def increasing(self) -> bool:
        """Terms approach the limit from below."""
        return self.c < 0

    def point(self, k: int) -> Fraction:
        return self.a + self.c * self.r**k

    def points(self, stop: int | None = None) -> Iterator[tuple[int, Fraction]]:
        k = self.k0
        step = self.c * self.r**k
        while stop is None or k < stop:
            yield k, self.a + step
            step *= self.r
            k += 1

    def member(self, x: Fraction) -> Optional[int]:
        d = (Fraction(x) - self.a) / self.c
        if d <= 0 or d > 1:
            return None
        # r = p/q in lowest terms, so d = r**k forces den(d) = q**k exactly
        p, q = self.r.numerator, self.r.denominator
        den = d.denominator
        guess = round(math.log(den) / math.log(q)) if den > 1 else 0
        for k in (guess - 1, guess, guess + 1):
            if k >= self.k0 and q**k == den and p**k == d.numerator:
                return k
        return None

    def tail_start(self, delta) -> int:
        """Smallest k >= k0 whose term lies strictly within ``delta`` of the limit."""
        if delta == float("inf"):
            return self.k0
        k = self.k0
        t = abs(self.c) * self.r**k
        while t >= delta:
            t *= self.r
            k += 1
            if k - self.k0 > MAX_PREFIX:
                raise NotCanonicalizable(f"{self} needs more than {MAX_PREFIX} explicit terms")
        return k

    def from_index(self, k: int) -> "SeqGen":
        return SeqGen(self.a, self.c, self.r, max(k, self.k0))

    def negate(self) -> "SeqGen":
        return SeqGen(-self.a, -self.c, self.r, self.k0)

    def text(self) -> str:
        return f"gen({fmt(self.a)};{fmt(self.c)};{fmt(self.r)};{self.k0})"

    def __repr__(self):
        return self.text()


# ---------------------------------------------------------------------------
# generator/generator interaction


@dataclass(frozen=True)
class Meet:
    """Common terms of two generators, indexed along the first one.

    Either a finite set of indices, or the progression ``start + t*period``.
    """

    indices: tuple[int, ...] = ()
    start: Optional[int] = None
    period: Optional[int] = None

    @property
    def empty(self) -> bool:
        return not self.indices and self.start is None


def _separated_meet(g: SeqGen, h: SeqGen) -> Meet:
    gap = abs(g.a - h.a) / 2
    kg = g.tail_start(gap)
    kh = h.tail_start(gap)
    found = set()
    for k, p in g.points(kg):
        if h.member(p) is not None:
            found.add(k)
    for _, p in h.points(kh):
        k = g.member(p)
        if k is not None:
            found.add(k)
    return Meet(indices=tuple(sorted(found)))


def meet(g: SeqGen, h: SeqGen) -> Meet:
    if g.a != h.a:
        return _separated_meet(g, h)
    if (g.c > 0) != (h.c > 0):
        return Meet()
    u = g.c / h.c
    # u * rg**k == rh**j, solved on exponent vectors over a coprime basis.
    basis = coprime_basis(
        [u.numerator, u.denominator, g.r.numerator, g.r.denominator, h.r.numerator, h.r.denominator]
    )
    vu = exponent_vector(u, basis)
    vg = exponent_vector(g.r, basis)
    vh = exponent_vector(h.r, basis)
    n = len(basis)
    for i in range(n):
        for l in range(i + 1, n):
            det = vg[i] * vh[l] - vg[l] * vh[i]
            if det != 0:
                return _independent_meet(g, h, vu, vg, vh, i, l, det)
    # vg and vh are parallel: both are positive multiples of a primitive w.
    from math import gcd

    alpha = 0
    for e in vg:
        alpha = gcd(alpha, abs(e))
    w = [e // alpha for e in vg]
    piv = next(i for i, e in enumerate(w) if e != 0)
    beta = vh[piv] // w[piv]
    if [beta * e for e in w] != vh or beta <= 0:
        raise NotCanonicalizable(f"cannot relate ratios of {g} and {h}")
    gamma = vu[piv] // w[piv] if w[piv] else 0
    if [gamma * e for e in w] != vu:
        return Meet()
    # gamma + k*alpha == j*beta
    d, x, y = ext_gcd(alpha, beta)
    if gamma % d:
        return Meet()
    s = -gamma // d
    kp, jp = x * s, -y * s
    mk, mj = beta // d, alpha // d
    t = max(ceil_div(g.k0 - kp, mk), ceil_div(h.k0 - jp, mj))
    return Meet(start=kp + t * mk, period=mk)


def _independent_meet(g, h, vu, vg, vh, i, l, det) -> Meet:
    # k*vg - j*vh = -vu on rows i, l
    k = Fraction(vu[i] * vh[l] - vh[i] * vu[l], -det)
    j = Fraction(-vg[i] * vu[l] + vu[i] * vg[l], -det)
    if k.denominator != 1 or j.denominator != 1:
        return Meet()
    k, j = int(k), int(j)
    if k < g.k0 or j < h.k0:
        return Meet()
    if g.point(k) != h.point(j):
        return Meet()
    return Meet(indices=(k,))


def remove_indices(g: SeqGen, idx) -> tuple[list[Fraction], list[SeqGen]]:
    idx = set(idx)
    if not idx:
        return [], [g]
    top = max(idx)
    pts = [p for k, p in g.points(top + 1) if k not in idx]
    return pts, [g.from_index(top + 1)]


def subsequence(g: SeqGen, start: int, period: int) -> SeqGen:
    if period == 1:
        return g.from_index(start)
    return SeqGen(g.a, g.c * g.r**start, g.r**period, 0)


def gen_inter(g: SeqGen, h: SeqGen) -> tuple[list[Fraction], list[SeqGen]]:
    m = meet(g, h)
    if m.start is not None:
        return [], [subsequence(g, m.start, m.period)]
    return [g.point(k) for k in m.indices], []


def gen_diff(g: SeqGen, h: SeqGen) -> tuple[list[Fraction], list[SeqGen]]:
    m = meet(g, h)
    if m.start is None:
        return remove_indices(g, m.indices)
    pts = [p for _, p in g.points(m.start)]
    gens = [subsequence(g, m.start + rho, m.period) for rho in range(1, m.period)]
    return pts, gens
