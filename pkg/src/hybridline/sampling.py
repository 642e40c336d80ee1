"""Seeded rational samples concentrated where a cover changes behaviour."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

from .cover import FourCover
from .rng import SplitMix64


def landmarks(cover: FourCover, gen_terms: int = 4) -> list[Fraction]:
    """Breakpoints, override points, sequence limits and leading sequence terms."""
    out = set(cover.breakpoints)
    out.update(p for p, _ in cover.point_overrides)
    for g, _ in cover.gen_overrides:
        out.add(g.a)
        out.update(p for _, p in g.points(g.k0 + gen_terms))
    out.add(Fraction(0))
    return sorted(out)


def sample_point(cover: FourCover, rng: SplitMix64, marks: Optional[list] = None) -> Fraction:
    marks = landmarks(cover) if marks is None else marks
    kind = rng.below(4)
    if kind == 0:
        return rng.choice(marks)
    if kind == 1:
        # a little to either side of a landmark
        off = Fraction(rng.between(1, 3), 2 ** rng.between(1, 12))
        return rng.choice(marks) + (off if rng.chance(1, 2) else -off)
    return rng.rational(bound=3, max_den=12)


def sample_points(cover: FourCover, rng: SplitMix64, count: int) -> list[Fraction]:
    marks = landmarks(cover)
    return [sample_point(cover, rng, marks) for _ in range(count)]


def sample_near(x: Fraction, rng: SplitMix64) -> Fraction:
    off = Fraction(rng.between(1, 7), 2 ** rng.between(0, 10))
    return x + off if rng.chance(1, 2) else x - off


def sample_triples(cover: FourCover, rng: SplitMix64, count: int, pool: Optional[list] = None) -> Iterator[tuple]:
    """Triples ``(x, y, z)``; ``y`` and ``z`` often sit close to ``x`` or to each other."""
    marks = landmarks(cover)

    def draw():
        if pool:
            return rng.choice(pool)
        return sample_point(cover, rng, marks)

    for _ in range(count):
        x = draw()
        mode = rng.below(5)
        if mode == 0:
            y, z = draw(), draw()
        elif mode == 1:
            y = sample_near(x, rng)
            z = sample_near(x, rng)
        elif mode == 2:
            y = sample_near(x, rng)
            z = sample_near(y, rng)
        elif mode == 3:
            y = x
            z = sample_near(x, rng)
        else:
            z = sample_near(x, rng)
            y = draw()
        yield x, y, z


def sample_in_region(cover: FourCover, rng: SplitMix64, label: int, count: int, attempts: int = 200) -> list[Fraction]:
    """Up to ``count`` sampled points carrying ``label``."""
    marks = landmarks(cover)
    out = []
    for _ in range(count * attempts):
        if len(out) >= count:
            break
        x = sample_point(cover, rng, marks)
        if cover.label_of(x) == label:
            out.append(x)
    return out
