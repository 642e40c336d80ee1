"""Desk-scale acceptance run. Each test records one numbered PASS/FAIL line.

Pinned tolerances: every check is exact rational arithmetic, except the
continuity check at 2^-20 and the 120 s runtime budget of criterion 1.
"""

import time
from fractions import Fraction as F

import pytest

from hybridline.cli.fuzz import fuzz_covers
from hybridline.cli.main import main
from hybridline.cli.suite import closed_pair, extractor_closure_violations
from hybridline.cover import basic_set, make_cover, preset
from hybridline.decompose import classify, gdelta_extract, synthesize_decomposition, validate_decomposition
from hybridline.errors import BoundExhausted, NotOneSideClosed
from hybridline.exactsets import RSet, SeqGen, fmt
from hybridline.qbase import min_nbhd_level
from hybridline.qmetric import ExtractorParams, QuasiMetric
from hybridline.rng import SplitMix64
from hybridline.sampling import sample_in_region, sample_near, sample_point, sample_points
from hybridline.separation import check_continuity, check_normality, urysohn_eval, urysohn_spec

SEED = 42
RUNTIME_BUDGET = 120
CONTINUITY_EXP = 20
PRESET_NAMES = ("real-line", "sorgenfrey", "sorgenfrey-left", "discrete", "hattori")


def covers(fuzzed=6):
    return [preset(n) for n in PRESET_NAMES] + fuzz_covers(SEED, fuzzed)


def test_axioms(criterion):
    start = time.perf_counter()
    violations, checked = [], 0
    for i, cover in enumerate(fuzz_covers(SEED, 20)):
        rep = QuasiMetric(cover).check_axioms(SEED + i, 500)
        checked += rep.checked
        violations += rep.violations
    elapsed = time.perf_counter() - start
    ok = not violations and checked == 10_000 and elapsed < RUNTIME_BUDGET
    criterion(1, ok, f"quasi-metric axioms: {checked} triples, {len(violations)} violations, {elapsed:.1f}s")
    assert ok, violations[:3]


def test_ball_kernel_identity(criterion):
    rng = SplitMix64(SEED)
    structural = pointwise = 0
    bad = None
    for cover in covers():
        qm = QuasiMetric(cover)
        for x in sample_points(cover, rng, 50):
            for n in range(25):
                structural += 1
                if not qm.ball(x, n).structurally_equal(min_nbhd_level(cover, qm.dec, n, x)):
                    bad = bad or f"structural x={fmt(x)} n={n}"
            n = rng.between(0, 24)
            B = qm.ball(x, n)
            for _ in range(100):
                y = sample_point(cover, rng) if rng.chance(1, 4) else x + F(rng.between(-64, 64), 2 ** rng.between(0, n + 3))
                pointwise += 1
                if B.member(y) != (qm.qdist(x, y).value < F(1, 2**n)):
                    bad = bad or f"pointwise x={fmt(x)} n={n} y={fmt(y)}"
    criterion(2, bad is None, f"ball = kernel: {structural} structural, {pointwise} pointwise checks" + (f", first miss {bad}" if bad else ""))
    assert bad is None


def test_topology_agreement(criterion):
    rng = SplitMix64(SEED + 1)
    tries = hits = 0
    for cover in covers():
        qm = QuasiMetric(cover)
        for x in sample_points(cover, rng, 50):
            for k in range(13):
                tries += 1
                hits += qm.ball_inside_basic(x, k) is not None
            tries += 1
            hits += qm.basic_inside_ball(x, rng.between(0, 24)) is not None
    criterion(3, hits == tries, f"topology agreement: {hits}/{tries} bounded searches succeeded")
    assert hits == tries


def test_shape_laws(criterion):
    rng = SplitMix64(SEED + 2)
    problems = []
    s = QuasiMetric(preset("sorgenfrey"))
    for x in sample_points(s.cover, rng, 40):
        # below the covering index the ball still reaches left past x
        for n in range(s.dec.index_F(x) + 1, 25):
            B = s.ball(x, n)
            iv = B.intervals[0] if len(B.intervals) == 1 and not B.points_plus else None
            if iv is None or iv.lo != x or not iv.lo_closed or iv.hi_closed or iv.hi <= x:
                problems.append(f"sorgenfrey x={fmt(x)} n={n}: {B.text()}")
    r = QuasiMetric(preset("real-line"))
    for x in sample_points(r.cover, rng, 40):
        y = sample_near(x, rng)
        for n in range(r.witness_level(x, y), 25):
            B = r.ball(x, n)
            iv = B.intervals[0] if len(B.intervals) == 1 and not B.points_plus else None
            if iv is None or iv.lo_closed or iv.hi_closed or not iv.lo < x < iv.hi:
                problems.append(f"real-line x={fmt(x)} n={n}: {B.text()}")
    iso = [(preset("discrete"), x) for x in sample_points(preset("discrete"), rng, 20)]
    for cover in fuzz_covers(SEED, 20):
        iso += [(cover, x) for x in sample_in_region(cover, rng, 2, 3)]
    for cover, x in iso:
        qm = QuasiMetric(cover)
        for n in (0, 1, 5, 24):
            if qm.ball(x, n) != RSet.points([x]):
                problems.append(f"isolated x={fmt(x)} n={n}")
    asym = None
    for x, y in zip(sample_points(s.cover, rng, 50), sample_points(s.cover, rng, 50)):
        if x != y and s.qdist(x, y) != s.qdist(y, x):
            asym = (x, y)
            break
    ok = not problems and asym is not None
    w = f"asymmetry rho({fmt(asym[0])},{fmt(asym[1])}) != rho({fmt(asym[1])},{fmt(asym[0])})" if asym else "no asymmetry found"
    criterion(4, ok, f"shape laws: {len(problems)} shape violations, {len(iso)} isolated centres; {w}")
    assert ok, problems[:3]


def test_decomposition(criterion):
    start = time.perf_counter()
    checked = [preset(n) for n in PRESET_NAMES] + fuzz_covers(SEED, 3)
    failures = []
    for cover in checked:
        rep = validate_decomposition(cover, synthesize_decomposition(cover), 64)
        if not rep.ok:
            failures.append((cover.name, rep.first.as_dict()))
    rng = SplitMix64(SEED + 3)
    points = uncovered = 0
    pool = fuzz_covers(SEED + 100, 50)
    while points < 1000:
        cover = rng.choice(pool)
        dec = synthesize_decomposition(cover)
        for lab, index in ((3, dec.index_F), (4, dec.index_H)):
            for x in sample_in_region(cover, rng, lab, 5):
                if points < 1000:
                    points += 1
                    uncovered += index(x) is None
    ok = not failures and uncovered == 0
    criterion(5, ok, f"decomposition: {len(checked)} covers valid to n=64, {points - uncovered}/{points} one-sided points indexed, {time.perf_counter() - start:.1f}s")
    assert ok, failures


@pytest.mark.xfail(strict=True, reason="enumerated rationals up to index 64 are too coarse to fit inside most half-open windows")
def test_extractor(criterion):
    rng = SplitMix64(SEED + 4)
    sampled = found = probed = 0
    leaks = []
    for cover in [c for c in covers(10) if not c.region(3).is_empty()]:
        qm = QuasiMetric(cover)
        groups = {}
        for x in sample_in_region(cover, rng, 3, 100):
            sampled += 1
            try:
                k, n = qm.extractor_cover(x, 64)
            except BoundExhausted:
                continue
            found += 1
            groups.setdefault(ExtractorParams(k, n), []).append(x)
        for p in sorted(groups, key=lambda p: (p.k, p.n)):
            checked, bad = extractor_closure_violations(qm, p, groups[p], rng, 20)
            probed += checked
            leaks += bad
    ok = found == sampled and not leaks
    criterion(6, ok, f"extractor: {found}/{sampled} right half-open points covered within bound 64 ({100 * found / max(1, sampled):.0f}%); {probed} closure points probed, {len(leaks)} outside A2/A3")
    assert ok


def one_side_closed_sets(rng, count):
    out = []
    while len(out) < count:
        side = "Sright" if rng.chance(1, 2) else "Sleft"
        parts = []
        for _ in range(rng.between(1, 3)):
            a, b = sorted((rng.rational(4, 8), rng.rational(4, 8)))
            if a != b:
                parts.append(RSet.interval(a, b, rng.chance(1, 2), rng.chance(1, 2)))
        if rng.chance(1, 2):
            a = rng.rational(4, 4)
            parts.append(RSet.gen(SeqGen(a, F(rng.choice([1, -1]), 2), rng.choice([F(1, 2), F(1, 3)]), 1)))
        if rng.chance(1, 2):
            parts.append(RSet.points([rng.rational(4, 8)]))
        if parts:
            S = RSet.empty()
            for p in parts:
                S = S | p
            out.append((S.closure(side), side))
    return out


def test_gdelta_certificates(criterion):
    rng = SplitMix64(SEED + 5)
    sets = one_side_closed_sets(rng, 50)
    bad = []
    probes = 0
    for S, side in sets:
        try:
            cert = gdelta_extract(S, side)
        except NotOneSideClosed:
            bad.append(f"{S.text()} rejected")
            continue
        if cert.defect.intervals:
            bad.append(f"{S.text()} defect {cert.defect.text()}")
        families = [cert.open_family(n) for n in range(33)]
        for _ in range(40):
            y = rng.rational(5, 16)
            probes += 1
            if S.member(y) != all(U.member(y) for U in families):
                bad.append(f"{S.text()} at {fmt(y)}")
    criterion(7, not bad, f"one-side-closed sets: {len(sets)} sets, countable defects, {probes} membership probes at n<=32, {len(bad)} mismatches")
    assert not bad, bad[:3]


def test_normality_and_urysohn(criterion):
    rng = SplitMix64(SEED + 6)
    pairs = separator_pairs = 0
    problems = []
    for cover in fuzz_covers(SEED + 200, 60):
        if pairs == 20:
            break
        pair = closed_pair(cover, rng)
        if pair is None:
            continue
        pairs += 1
        S, T = pair
        s0 = [p for p in sample_points(cover, rng, 40) if S.member(p)] + [S.sample_point()]
        s1 = [p for p in sample_points(cover, rng, 40) if T.member(p)] + [T.sample_point()]
        rep = check_normality(cover, S, T, s0, s1)
        separator_pairs += rep.pairs
        if not rep.ok:
            problems.append(rep.precondition or rep.failures[0])
    # the displayed formula on a right half-open point
    s = preset("sorgenfrey")
    spec = urysohn_spec(s, 0, RSet.closed(1, 2))
    eps, delta = spec.eps, F(1, 1000)
    exact = (urysohn_eval(spec, eps / 2), urysohn_eval(spec, 3 * eps / 4), urysohn_eval(spec, -delta))
    if exact != (0, F(1, 2), 1):
        problems.append(f"formula values {exact}")
    cont_points = 0
    for cover in (s, preset("hattori"), make_cover([0, 1], [4, 3, 1, 3, 2])):
        x = sample_in_region(cover, rng, cover.label_of(F(1, 2)), 1)[0]
        E = cover.closure(RSet.closed(x + 3, x + 4))
        spec = urysohn_spec(cover, x, E)
        pts = sample_points(cover, rng, 40) + [x, x + spec.eps / 2, x + spec.eps, x - spec.eps]
        cont = check_continuity(cover, spec, pts, rng, tol_exp=CONTINUITY_EXP)
        cont_points += cont.checked
        problems += cont.failures
    ok = pairs == 20 and not problems
    criterion(8, ok, f"normality/Urysohn: {pairs} closed pairs, {separator_pairs} separator pairs disjoint, f = 0, 1/2, 1 exact, continuity at 2^-{CONTINUITY_EXP} on {cont_points} points")
    assert ok, problems[:3]


def test_classification(criterion):
    table = {
        "sorgenfrey": (preset("sorgenfrey"), {"quasi_metrizable": True, "metrizable_sufficient": False, "second_countable": False}),
        "real-line": (preset("real-line"), {"quasi_metrizable": True, "metrizable_sufficient": True, "second_countable": True}),
        "countable overrides": (
            make_cover(piece_labels=[1], point_overrides=[(5, 4), (F(-1, 3), 3)], gen_overrides=[(SeqGen(0, 1, F(1, 2), 1), 3)]),
            {"quasi_metrizable": True, "metrizable_sufficient": True},
        ),
    }
    wrong = []
    for name, (cover, expected) in table.items():
        got = classify(cover).as_dict()
        if any(got[k] != v for k, v in expected.items()):
            wrong.append(f"{name}: {got}")
    criterion(9, not wrong, f"classification: {len(table) - len(wrong)}/{len(table)} crafted covers match the truth table")
    assert not wrong


def test_determinism(criterion, tmp_path, capsys):
    paths = [tmp_path / "run1.jsonl", tmp_path / "run2.jsonl"]
    codes = [main(["check", "--suite", "all", "--seed", "42", "--report", str(p)]) for p in paths]
    capsys.readouterr()
    a, b = (p.read_bytes() for p in paths)
    ok = a == b and len(a) > 0
    criterion(10, ok, f"determinism: two seeded runs, {len(a)} bytes each, identical={a == b}, exit codes {codes}")
    assert ok


def test_basic_sets_are_the_reference_for_shapes():
    # guards the oracle used by criteria 3 and 4
    assert basic_set(3, F(0), F(1, 2)) == RSet.interval(0, F(1, 2), True, False)
    assert basic_set(4, F(0), F(1, 2)) == RSet.interval(F(-1, 2), 0, False, True)
