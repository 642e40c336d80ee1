"""Separating neighbourhoods for disjoint closed sets and Urysohn functions at points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cover import FourCover, basic_set
from .errors import NoFiniteN, SpecInvalid
from .exactsets import RSet, fmt
from .exactsets.numbers import floor_log2_inverse
from .rng import SplitMix64
from .settings import max_level

N_CAP = 2**64


@dataclass(frozen=True)
class SepNbhd:
    center: Fraction
    n_of_c: Optional[int]  # None for isolated points
    set: RSet


def _side_distances(c: Fraction, other: RSet) -> tuple[Optional[Fraction], Optional[Fraction]]:
    """Gaps from ``c`` to ``other`` on the left and on the right (None when that side is empty)."""
    below, above = other.sup_below(c), other.inf_above(c)
    left = c - below.value if below.nonempty else None
    right = above.value - c if above.nonempty else None
    return left, right


def _relevant_gap(cover: FourCover, c: Fraction, other: RSet) -> Optional[Fraction]:
    left, right = _side_distances(c, other)
    lab = cover.label_of(c)
    gaps = {1: (left, right), 3: (right,), 4: (left,)}[lab]
    gaps = [g for g in gaps if g is not None]
    return min(gaps) if gaps else None


def sep_nbhd(cover: FourCover, c, other: RSet) -> SepNbhd:
    """Half-radius neighbourhood ``U(c)`` built from the least admissible ``n``."""
    c = Fraction(c)
    if other.member(c):
        raise ValueError(f"{fmt(c)} lies in the other set")
    lab = cover.label_of(c)
    if lab == 2:
        return SepNbhd(c, None, RSet.points([c]))
    d = _relevant_gap(cover, c, other)
    if d is None:
        n = 1
    elif d == 0:
        raise NoFiniteN(f"{fmt(c)} is in the closure of the other set")
    else:
        n = max(1, math.ceil(1 / d))
    if n > N_CAP:
        raise NoFiniteN(f"n({fmt(c)}) exceeds 2^64")
    # the gap bound is exact, so this is a cheap self-check
    assert (basic_set(lab, c, Fraction(1, n)) & other).is_empty()
    return SepNbhd(c, n, basic_set(lab, c, Fraction(1, 2 * n)))


@dataclass
class NormalityReport:
    precondition: Optional[str] = None
    pairs: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.precondition is None and not self.failures


def check_normality(cover: FourCover, C0: RSet, C1: RSet, samples0, samples1) -> NormalityReport:
    report = NormalityReport()
    overlap = C0 & C1
    if not overlap.is_empty():
        report.precondition = f"sets meet at {fmt(overlap.sample_point())}"
        return report
    U0 = [sep_nbhd(cover, c, C1) for c in samples0]
    U1 = [sep_nbhd(cover, c, C0) for c in samples1]
    for a in U0:
        for b in U1:
            report.pairs += 1
            meet = a.set & b.set
            if not meet.is_empty():
                report.failures.append({"c0": fmt(a.center), "c1": fmt(b.center), "witness": fmt(meet.sample_point())})
    return report


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UrysohnSpec:
    x: Fraction
    label: int
    eps: Fraction
    E: RSet

    def __post_init__(self):
        if self.eps <= 0:
            raise SpecInvalid("radius must be positive")
        if not (basic_set(self.label, self.x, self.eps) & self.E).is_empty():
            raise SpecInvalid(f"neighbourhood of {fmt(self.x)} with radius {fmt(self.eps)} meets the set")


def choose_epsilon(cover: FourCover, x, E: RSet, max_k: Optional[int] = None) -> Fraction:
    """Largest ``2**-k`` whose basic neighbourhood of ``x`` misses ``E``."""
    x = Fraction(x)
    if E.member(x):
        raise ValueError(f"{fmt(x)} lies in the set")
    max_k = max_level() if max_k is None else max_k
    lab = cover.label_of(x)
    if lab == 2:
        k = 0
    else:
        d = _relevant_gap(cover, x, E)
        if d == 0:
            raise NoFiniteN(f"{fmt(x)} is in the closure of the set")
        k = 0 if d is None else floor_log2_inverse(d)
    if k > max_k:
        raise NoFiniteN(f"no radius 2^-k with k <= {max_k} fits")
    eps = Fraction(1, 2**k)
    assert (basic_set(lab, x, eps) & E).is_empty()
    return eps


def urysohn_spec(cover: FourCover, x, E: RSet, eps=None) -> UrysohnSpec:
    x = Fraction(x)
    eps = choose_epsilon(cover, x, E) if eps is None else Fraction(eps)
    return UrysohnSpec(x, cover.label_of(x), eps, E)


def _ramp(u: Fraction, eps: Fraction) -> Fraction:
    """Value at distance ``u >= 0`` from the centre along the open side."""
    if u <= eps / 2:
        return Fraction(0)
    if u < eps:
        return 2 * u / eps - 1
    return Fraction(1)


def urysohn_eval(spec: UrysohnSpec, t) -> Fraction:
    """``f(x) = 0`` and ``f = 1`` off the basic neighbourhood, piecewise linear between."""
    t, x = Fraction(t), spec.x
    if spec.label == 2:
        return Fraction(0) if t == x else Fraction(1)
    if spec.label == 3:
        return Fraction(1) if t < x else _ramp(t - x, spec.eps)
    if spec.label == 4:
        return Fraction(1) if t > x else _ramp(x - t, spec.eps)
    return _ramp(abs(t - x), spec.eps)


@dataclass
class ContinuityReport:
    checked: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_continuity(cover: FourCover, spec: UrysohnSpec, points, rng: SplitMix64, tol_exp: int = 20, per_point: int = 50, max_k: int = 64) -> ContinuityReport:
    """For each point find a basic neighbourhood on which sampled values stay within ``2**-tol_exp``."""
    tol = Fraction(1, 2**tol_exp)
    report = ContinuityReport()
    for t in points:
        t = Fraction(t)
        lab = cover.label_of(t)
        ft = urysohn_eval(spec, t)
        report.checked += 1
        found = False
        for k in range(max_k + 1):
            r = Fraction(1, 2**k)
            ok = True
            for _ in range(per_point):
                s = _sample_in_basic(lab, t, r, rng)
                if abs(urysohn_eval(spec, s) - ft) >= tol:
                    ok = False
                    break
            if ok:
                found = True
                break
        if not found:
            report.failures.append({"t": fmt(t), "label": lab})
    return report


def _sample_in_basic(label: int, t: Fraction, r: Fraction, rng: SplitMix64) -> Fraction:
    if label == 2:
        return t
    u = r * Fraction(rng.below(1 << 16), 1 << 16)
    if label == 3:
        return t + u
    if label == 4:
        return t - u
    return t + u if rng.chance(1, 2) else t - u
