"""Four-way labelled partitions of the real line and their local bases.

Label 1 points get two-sided neighbourhoods ``(x-e, x+e)``, label 2 points
are isolated, label 3 points get ``[x, x+e)`` and label 4 points ``(x-e, x]``.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

from .errors import OverlapError, ParseError, SearchExhausted
from .exactsets import INF, NINF, RSet, SeqGen, fmt, parse_rational, union_all
from .settings import max_level

LABELS = (1, 2, 3, 4)
LABEL_NAMES = {1: "two-sided", 2: "isolated", 3: "right half-open", 4: "left half-open"}


@dataclass(frozen=True)
class LocalBaseNbhd:
    center: Fraction
    label: int
    radius: Fraction
    set: RSet


@dataclass(frozen=True)
class FourCover:
    """Piecewise labelling plus finitely many point and sequence overrides.

    ``piece_labels`` interleaves open pieces and breakpoint singletons:
    ``[(-inf,b0), {b0}, (b0,b1), {b1}, ..., (b_{m-1},inf)]``.
    Overrides take precedence: points, then generators, then breakpoints,
    then open pieces.
    """

    breakpoints: tuple[Fraction, ...] = ()
    piece_labels: tuple[int, ...] = (1,)
    point_overrides: tuple[tuple[Fraction, int], ...] = ()
    gen_overrides: tuple[tuple[SeqGen, int], ...] = ()
    name: Optional[str] = None

    # -- queries ------------------------------------------------------------

    def label_of(self, x) -> int:
        x = Fraction(x)
        for p, lab in self.point_overrides:
            if p == x:
                return lab
        for g, lab in self.gen_overrides:
            if g.member(x) is not None:
                return lab
        i = bisect.bisect_left(self.breakpoints, x)
        if i < len(self.breakpoints) and self.breakpoints[i] == x:
            return self.piece_labels[2 * i + 1]
        return self.piece_labels[2 * i]

    @cached_property
    def _regions(self) -> dict[int, RSet]:
        bps = self.breakpoints
        base: dict[int, list[RSet]] = {lab: [] for lab in LABELS}
        for i in range(len(bps) + 1):
            lo = bps[i - 1] if i > 0 else NINF
            hi = bps[i] if i < len(bps) else INF
            base[self.piece_labels[2 * i]].append(RSet.open(lo, hi))
            if i < len(bps):
                base[self.piece_labels[2 * i + 1]].append(RSet.points([bps[i]]))
        overrides = [RSet.points([p]) for p, _ in self.point_overrides]
        overrides += [RSet.gen(g) for g, _ in self.gen_overrides]
        carved = union_all(overrides)
        out = {}
        for lab in LABELS:
            own = [RSet.points([p]) for p, lb in self.point_overrides if lb == lab]
            own += [RSet.gen(g) for g, lb in self.gen_overrides if lb == lab]
            out[lab] = (union_all(base[lab]) - carved) | union_all(own)
        return out

    def region(self, label: int) -> RSet:
        if label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}")
        return self._regions[label]

    def regions(self, labels: Iterable[int]) -> RSet:
        return union_all(self.region(lab) for lab in labels)

    def local_base_nbhd(self, x, eps) -> LocalBaseNbhd:
        x, eps = Fraction(x), Fraction(eps)
        if eps <= 0:
            raise ValueError("radius must be positive")
        lab = self.label_of(x)
        return LocalBaseNbhd(x, lab, eps, basic_set(lab, x, eps))

    def closure(self, S: RSet) -> RSet:
        """Closure of ``S`` in the hybrid topology."""
        return (
            S
            | (S.closure("R") & self.region(1))
            | (S.closure("Sright") & self.region(3))
            | (S.closure("Sleft") & self.region(4))
        )

    def is_closed(self, S: RSet) -> bool:
        return self.closure(S).issubset(S)

    def is_open_sampled(self, S: RSet, samples: Iterable, max_k: Optional[int] = None) -> bool:
        """Certify that each sample has a basic neighbourhood inside ``S``.

        Radii ``2**-k`` are tried for ``k <= max_k``; failure raises
        :class:`SearchExhausted` since a finite search cannot prove non-openness.
        """
        max_k = max_level() if max_k is None else max_k
        for x in samples:
            x = Fraction(x)
            if not S.member(x):
                raise ValueError(f"sample {fmt(x)} is not in the set")
            if not any(self.local_base_nbhd(x, Fraction(1, 2**k)).set.issubset(S) for k in range(max_k + 1)):
                raise SearchExhausted(f"no basic neighbourhood of {fmt(x)} with radius >= 2^-{max_k} fits")
        return True

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "breakpoints": [fmt(b) for b in self.breakpoints],
            "piece_labels": list(self.piece_labels),
            "point_overrides": [[fmt(p), lab] for p, lab in self.point_overrides],
            "gen_overrides": [
                [{"a": fmt(g.a), "c": fmt(g.c), "r": fmt(g.r), "k0": g.k0}, lab] for g, lab in self.gen_overrides
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json()) + "\n"

    @property
    def label(self) -> str:
        return self.name or "cover"


def basic_set(label: int, x: Fraction, eps: Fraction) -> RSet:
    if label == 1:
        return RSet.open(x - eps, x + eps)
    if label == 2:
        return RSet.points([x])
    if label == 3:
        return RSet.closed_open(x, x + eps)
    return RSet.open_closed(x - eps, x)


def make_cover(breakpoints=(), piece_labels=(1,), point_overrides=(), gen_overrides=(), name=None) -> FourCover:
    """Build and validate a cover; overrides are canonically sorted."""
    cov = FourCover(
        tuple(Fraction(b) for b in breakpoints),
        tuple(int(x) for x in piece_labels),
        tuple(sorted((Fraction(p), int(lab)) for p, lab in point_overrides)),
        tuple(sorted((g, int(lab)) for g, lab in gen_overrides)),
        name,
    )
    return validate_cover(cov)


def cover_violations(cov: FourCover) -> list[str]:
    out = []
    bps = cov.breakpoints
    if list(bps) != sorted(set(bps)):
        out.append("breakpoints must be strictly increasing")
    if len(cov.piece_labels) != 2 * len(bps) + 1:
        out.append(f"piece_labels has {len(cov.piece_labels)} entries, expected {2 * len(bps) + 1}")
    for lab in list(cov.piece_labels) + [lab for _, lab in cov.point_overrides] + [lab for _, lab in cov.gen_overrides]:
        if lab not in LABELS:
            out.append(f"label {lab} not in 1..4")
    seen = {}
    for p, lab in cov.point_overrides:
        if p in seen:
            out.append(f"point {fmt(p)} overridden twice ({seen[p]} and {lab})")
        seen[p] = lab
    for i, (g, _) in enumerate(cov.gen_overrides):
        for b in bps:
            if g.member(b) is not None:
                out.append(f"{g.text()} hits breakpoint {fmt(b)}")
        for p in seen:
            if g.member(p) is not None:
                out.append(f"{g.text()} hits point override {fmt(p)}")
        for h, _ in cov.gen_overrides[i + 1 :]:
            if not (RSet.gen(g) & RSet.gen(h)).is_empty():
                out.append(f"{g.text()} and {h.text()} share points")
    return out


def validate_cover(cov: FourCover) -> FourCover:
    bad = cover_violations(cov)
    if bad:
        raise OverlapError(bad)
    return cov


def cover_from_json(doc: dict, name: Optional[str] = None) -> FourCover:
    if not isinstance(doc, dict):
        raise ParseError("cover document must be a JSON object")
    try:
        bps = [parse_rational(b) for b in doc.get("breakpoints", [])]
    except ValueError as exc:
        raise ParseError(str(exc), field="breakpoints") from exc
    labels = doc.get("piece_labels")
    if not isinstance(labels, list) or not all(isinstance(x, int) for x in labels):
        raise ParseError("expected a list of integers", field="piece_labels")
    if len(labels) != 2 * len(bps) + 1:
        raise ParseError(f"expected {2 * len(bps) + 1} labels, got {len(labels)}", field="piece_labels")
    points = []
    for i, item in enumerate(doc.get("point_overrides", [])):
        try:
            p, lab = item
            points.append((parse_rational(p), int(lab)))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad entry {i}: {item!r}", field="point_overrides") from exc
    gens = []
    for i, item in enumerate(doc.get("gen_overrides", [])):
        try:
            spec, lab = item
            g = SeqGen(parse_rational(spec["a"]), parse_rational(spec["c"]), parse_rational(spec["r"]), int(spec["k0"]))
            gens.append((g, int(lab)))
        except (TypeError, ValueError, KeyError) as exc:
            raise ParseError(f"bad entry {i}: {item!r}", field="gen_overrides") from exc
    cov = FourCover(
        tuple(bps),
        tuple(labels),
        tuple(sorted(points)),
        tuple(sorted(gens)),
        name,
    )
    return validate_cover(cov)


def cover_loads(text: str, name: Optional[str] = None) -> FourCover:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return cover_from_json(doc, name)


# ---------------------------------------------------------------------------
# presets

PRESETS = {
    "real-line": lambda: make_cover(piece_labels=[1], name="real-line"),
    "sorgenfrey": lambda: make_cover(piece_labels=[3], name="sorgenfrey"),
    "sorgenfrey-left": lambda: make_cover(piece_labels=[4], name="sorgenfrey-left"),
    "discrete": lambda: make_cover(piece_labels=[2], name="discrete"),
    # Hattori space H(A) with A = (-1, 1): the rationals are not representable,
    # so the two-sided region is a finite-breakpoint stand-in.
    "hattori": lambda: make_cover([-1, 1], [4, 4, 1, 1, 4], name="hattori"),
}

OUT_OF_SCOPE_PRESETS = {
    "engelking-lutzer": "needs A1 = Q and A4 = R - Q, which no finite description represents",
}


def preset(name: str) -> FourCover:
    if name in OUT_OF_SCOPE_PRESETS:
        raise ValueError(f"preset {name!r} is not representable: {OUT_OF_SCOPE_PRESETS[name]}")
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
