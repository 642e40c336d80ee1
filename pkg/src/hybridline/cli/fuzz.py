from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..cover import FourCover, cover_violations
from ..exactsets import SeqGen
from ..rng import SplitMix64

RATIOS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3))


@dataclass(frozen=True)
class FuzzSpec:
    max_breakpoints: int = 4
    max_point_overrides: int = 3
    max_gen_overrides: int = 2
    seed: int = 0


def _draw(spec: FuzzSpec, rng: SplitMix64, name: str) -> FourCover:
    nb = rng.between(0, spec.max_breakpoints)
    bps = sorted({rng.rational(bound=3, max_den=6) for _ in range(nb)})
    labels = [rng.between(1, 4) for _ in range(2 * len(bps) + 1)]
    points = {}
    for _ in range(rng.between(0, spec.max_point_overrides)):
        p = rng.rational(bound=3, max_den=12)
        if p not in bps:
            points[p] = rng.between(1, 4)
    gens = []
    for _ in range(rng.between(0, spec.max_gen_overrides)):
        a = rng.choice(bps) if bps and rng.chance(1, 2) else rng.rational(bound=3, max_den=8)
        c = Fraction(rng.between(1, 3), 2 ** rng.between(0, 3))
        if rng.chance(1, 2):
            c = -c
        gens.append((SeqGen(a, c, rng.choice(RATIOS), rng.between(0, 3)), rng.between(1, 4)))
    return FourCover(tuple(bps), tuple(labels), tuple(sorted(points.items())), tuple(sorted(gens)), name)


def fuzz_cover(spec: FuzzSpec, name: str = None) -> FourCover:
    """Deterministic valid cover; draws that fail validation are redrawn from the same stream."""
    rng = SplitMix64(spec.seed)
    name = name or f"fuzz-{spec.seed}"
    while True:
        cov = _draw(spec, rng, name)
        if not cover_violations(cov):
            return cov


def fuzz_covers(seed: int, count: int, spec: FuzzSpec = None) -> list[FourCover]:
    spec = spec or FuzzSpec()
    rng = SplitMix64(seed)
    out = []
    for i in range(count):
        s = FuzzSpec(spec.max_breakpoints, spec.max_point_overrides, spec.max_gen_overrides, rng.next_u64())
        out.append(fuzz_cover(s, name=f"fuzz-{seed}-{i}"))
    return out
