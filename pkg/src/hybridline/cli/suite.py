"""Property suites over a list of covers, reported as JSON lines."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from ..cover import FourCover
from ..decompose import Decomposition, synthesize_decomposition, validate_decomposition
from ..errors import BoundExhausted
from ..exactsets import RSet, fmt
from ..qbase import min_nbhd_level
from ..qmetric import ExtractorParams, QuasiMetric
from ..rng import SplitMix64
from ..sampling import sample_in_region, sample_point, sample_points
from ..separation import check_continuity, check_normality, urysohn_eval, urysohn_spec

SUITES = ("axioms", "balls", "topology", "decomposition", "normality", "urysohn", "extractor")


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    seed: int = 42
    samples: int = 200
    levels: int = 24
    corrupt_decomposition: bool = False

    def selected(self) -> tuple[str, ...]:
        if self.suite == "all":
            return SUITES
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        return (self.suite,)


def corrupt(dec: Decomposition) -> Decomposition:
    """Negative control: every level of ``F`` also claims ``[-1, 1]``."""
    extra = RSet.closed(-1, 1)
    return Decomposition(dec.cover, lambda n: dec.F(n) | extra, dec.H, name="corrupted")


class _Recorder:
    def __init__(self, cover_id: str):
        self.cover_id = cover_id
        self.records: list[dict] = []

    def add(self, suite: str, check: str, ok: bool, witness: str = "", status: Optional[str] = None):
        self.records.append(
            {
                "suite": suite,
                "cover_id": self.cover_id,
                "check": check,
                "witness": witness,
                "status": status or ("pass" if ok else "fail"),
            }
        )


def _scaled(samples: int, div: int) -> int:
    return max(1, samples // div) if samples else 0


# ---------------------------------------------------------------------------


def _axioms(qm: QuasiMetric, cfg: SuiteConfig, rng: SplitMix64, rec: _Recorder):
    rep = qm.check_axioms(rng.next_u64(), cfg.samples)
    w = json.dumps(rep.violations[0], sort_keys=True) if rep.violations else f"{rep.checked} triples"
    rec.add("axioms", "identity+ultrametric", rep.ok, w)


def _balls(qm: QuasiMetric, cfg: SuiteConfig, rng: SplitMix64, rec: _Recorder):
    bad = None
    xs = sample_points(qm.cover, rng, _scaled(cfg.samples, 20))
    for x in xs:
        n = rng.between(0, cfg.levels)
        B = qm.ball(x, n)
        if not B.structurally_equal(min_nbhd_level(qm.cover, qm.dec, n, x)):
            bad = bad or f"x={fmt(x)} n={n}: {B.text()}"
        for _ in range(10):
            y = sample_point(qm.cover, rng) if rng.chance(1, 3) else x + Fraction(rng.between(-64, 64), 2 ** rng.between(0, n + 2))
            if B.member(y) != (qm.qdist(x, y).value < Fraction(1, 2**n)):
                bad = bad or f"x={fmt(x)} n={n} y={fmt(y)}"
    rec.add("balls", "ball=kernel", bad is None, bad or f"{len(xs)} centres")


def _topology(qm: QuasiMetric, cfg: SuiteConfig, rng: SplitMix64, rec: _Recorder):
    bad = None
    xs = sample_points(qm.cover, rng, _scaled(cfg.samples, 20))
    for x in xs:
        for k in range(min(12, cfg.levels) + 1):
            if qm.ball_inside_basic(x, k) is None:
                bad = bad or f"x={fmt(x)} k={k}: no ball inside"
        n = rng.between(0, cfg.levels)
        if qm.basic_inside_ball(x, n) is None:
            bad = bad or f"x={fmt(x)} n={n}: no basic set inside"
    rec.add("topology", "tau(rho)=tau_A", bad is None, bad or f"{len(xs)} centres")


def _decomposition(qm: QuasiMetric, cfg: SuiteConfig, rng: SplitMix64, rec: _Recorder):
    rep = validate_decomposition(qm.cover, qm.dec, cfg.levels)
    rec.add("decomposition", "soundness", rep.ok, json.dumps(rep.first.as_dict(), sort_keys=True) if rep.first else f"n<={cfg.levels}")
    bad = None
    count = 0
    for lab, index in ((3, qm.dec.index_F), (4, qm.dec.index_H)):
        for x in sample_in_region(qm.cover, rng, lab, _scaled(cfg.samples, 10)):
            count += 1
            if index(x) is None:
                bad = bad or f"label {lab} point {fmt(x)} uncovered"
    rec.add("decomposition", "coverage", bad is None, bad or f"{count} points")


def closed_pair(cover: FourCover, rng: SplitMix64, attempts: int = 64):
    """Two disjoint sets, each closed in the hybrid topology, or None."""
    for _ in range(attempts):
        a, b = sorted((rng.rational(3, 8), rng.rational(3, 8)))
        c, d = sorted((rng.rational(3, 8), rng.rational(3, 8)))
        if a == b or c == d:
            continue
        S = RSet.interval(a, b, rng.chance(1, 2), rng.chance(1, 2)) | RSet.points([rng.rational(3, 8)])
        T = RSet.interval(c, d, rng.chance(1, 2), rng.chance(1, 2))
        S, T = cover.closure(S), cover.closure(T)
        if (S & T).is_empty() and not S.is_empty() and not T.is_empty():
            return S, T
    return None


def _sample_members(S: RSet, rng: SplitMix64, count: int) -> list[Fraction]:
    pts = []
    for iv in S.intervals:
        lo = iv.lo if iv.lo != float("-inf") else iv.hi - 4
        hi = iv.hi if iv.hi != float("inf") else lo + 4
        pts.extend([lo, hi])
        for _ in range(count):
            pts.append(lo + (hi - lo) * Fraction(rng.below(1024), 1024))
    pts.extend(S.points_plus)
    for g in S.gens_plus:
        pts.extend(p for _, p in g.points(g.k0 + 3))
    pts = sorted({p for p in pts if S.member(p)})
    return pts[: count * 2]


def _normality(qm: QuasiMetric, cfg: SuiteConfig, rng: SplitMix64, rec: _Recorder):
    pair = closed_pair(qm.cover, rng)
    if pair is None:
        rec.add("normality", "disjoint-separators", True, "no closed pair drawn", status="skip")
        return
    S, T = pair
    k = _scaled(cfg.samples, 40)
    rep = check_normality(qm.cover, S, T, _sample_members(S, rng, k), _sample_members(T, rng, k))
    w = rep.precondition or (json.dumps(rep.failures[0], sort_keys=True) if rep.failures else f"{rep.pairs} pairs")
    rec.add("normality", "disjoint-separators", rep.ok, w)


def _urysohn(qm: QuasiMetric, cfg: SuiteConfig, rng: SplitMix64, rec: _Recorder):
    pair = closed_pair(qm.cover, rng)
    if pair is None:
        rec.add("urysohn", "range+continuity", True, "no closed set drawn", status="skip")
        return
    E, other = pair
    xs = _sample_members(other, rng, 1)[:1]
    x = xs[0]
    spec = urysohn_spec(qm.cover, x, E)
    bad = None
    if urysohn_eval(spec, x) != 0:
        bad = f"f({fmt(x)}) != 0"
    for t in _sample_members(E, rng, _scaled(cfg.samples, 20)):
        if urysohn_eval(spec, t) != 1:
            bad = bad or f"f({fmt(t)}) != 1 on the set"
    probes = sample_points(qm.cover, rng, _scaled(cfg.samples, 20)) + [x, x + spec.eps / 2, x - spec.eps / 2, x + spec.eps]
    for t in probes:
        v = urysohn_eval(spec, t)
        if not 0 <= v <= 1:
            bad = bad or f"f({fmt(t)}) = {fmt(v)} out of range"
    cont = check_continuity(qm.cover, spec, probes, rng, per_point=20)
    if cont.failures:
        bad = bad or json.dumps(cont.failures[0], sort_keys=True)
    rec.add("urysohn", "range+continuity", bad is None, bad or f"x={fmt(x)} eps={fmt(spec.eps)}")


def left_closure_probe(qm: QuasiMetric, p: ExtractorParams, y: Fraction, depth: int) -> bool:
    """Whether ``y`` looks like a left-Sorgenfrey closure point of ``F_{k,n}``."""
    if qm.in_extractor_set(p, y):
        return True
    hits = [qm.in_extractor_set(p, y - Fraction(1, 2**i)) for i in range(depth - 8, depth)]
    return all(hits)


def extractor_closure_violations(qm: QuasiMetric, p: ExtractorParams, members: Iterable[Fraction], rng: SplitMix64, count: int = 20) -> tuple[int, list[str]]:
    """Sample candidate closure points near collected members and check their labels."""
    members = list(members)
    depth = max(40, p.n + 16)
    checked, bad = 0, []
    for _ in range(count):
        m = rng.choice(members)
        y = m + Fraction(rng.below(4), 2 ** rng.between(p.n, p.n + 8)) if rng.chance(1, 2) else m
        if not left_closure_probe(qm, p, y, depth):
            continue
        checked += 1
        if qm.cover.label_of(y) not in (2, 3):
            bad.append(fmt(y))
    return checked, bad


def _extractor(qm: QuasiMetric, cfg: SuiteConfig, rng: SplitMix64, rec: _Recorder):
    xs = sample_in_region(qm.cover, rng, 3, _scaled(cfg.samples, 20))
    if not xs:
        rec.add("extractor", "cover+closure", True, "no right half-open points", status="skip")
        return
    found, exhausted, bad = {}, 0, None
    for x in xs:
        try:
            k, n = qm.extractor_cover(x, 64)
        except BoundExhausted:
            exhausted += 1
            continue
        found.setdefault(ExtractorParams(k, n), []).append(x)
    for p, members in sorted(found.items(), key=lambda kv: (kv[0].k, kv[0].n)):
        _, leaks = extractor_closure_violations(qm, p, members, rng)
        if leaks:
            bad = bad or f"F_{{{p.k},{p.n}}} closure point {leaks[0]}"
    w = bad or f"{len(xs) - exhausted}/{len(xs)} covered within bound 64"
    rec.add("extractor", "cover+closure", bad is None, w, status=None if bad or not exhausted else "bound-exhausted")


RUNNERS: dict[str, Callable] = {
    "axioms": _axioms,
    "balls": _balls,
    "topology": _topology,
    "decomposition": _decomposition,
    "normality": _normality,
    "urysohn": _urysohn,
    "extractor": _extractor,
}


def run_suite(cfg: SuiteConfig, covers: list[FourCover]) -> tuple[int, list[dict]]:
    """Exit code (0 iff no failures) and the report records, fully determined by the inputs."""
    if cfg.samples == 0:
        return 0, []
    # one stream per cover, drawn up front so the order of work cannot matter
    root = SplitMix64(cfg.seed)
    seeds = [root.next_u64() for _ in covers]
    records = []
    for i, (cover, seed) in enumerate(zip(covers, seeds)):
        dec = synthesize_decomposition(cover)
        if cfg.corrupt_decomposition:
            dec = corrupt(dec)
        qm = QuasiMetric(cover, dec)
        rec = _Recorder(cover.name or f"cover-{i}")
        base = SplitMix64(seed)
        for name in cfg.selected():
            RUNNERS[name](qm, cfg, base.fork(), rec)
        records.extend(rec.records)
    failed = any(r["status"] == "fail" for r in records)
    return (1 if failed else 0), records


def dumps_report(records: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
