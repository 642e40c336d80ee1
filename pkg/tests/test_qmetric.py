from fractions import Fraction as F

import pytest

from hybridline.cli.fuzz import fuzz_covers
from hybridline.cover import make_cover, preset
from hybridline.errors import BoundExhausted, LabelError
from hybridline.exactsets import RSet, SeqGen, parse_rset
from hybridline.qbase import RATIONALS, min_nbhd_level
from hybridline.qmetric import CorruptQuasiMetric, DyadicDistance, ExtractorParams, QuasiMetric


def brute_level(qm, x, y, cap=80):
    """First n with y outside the independently computed kernel."""
    for n in range(cap):
        if not min_nbhd_level(qm.cover, qm.dec, n, x).member(y):
            return n
    return None


def test_dyadic_distance_order_and_text():
    vals = [DyadicDistance(None), DyadicDistance(5), DyadicDistance(1), DyadicDistance(0)]
    assert sorted(vals) == vals
    assert [v.text() for v in vals] == ["0", "2^-5", "2^-1", "2^-0"]
    assert DyadicDistance(3).value == F(1, 8)


def test_identity_and_isolated_points():
    qm = QuasiMetric(preset("sorgenfrey"))
    assert qm.qdist(F(1, 3), F(1, 3)).exponent is None
    disc = QuasiMetric(preset("discrete"))
    assert disc.qdist(0, F(1, 10**9)) == DyadicDistance(0)
    assert disc.witness_level(0, 7) == 0
    for n in (0, 5, 30):
        assert disc.ball(0, n) == parse_rset("{0}")


def test_sorgenfrey_distance_matches_brute_scan():
    qm = QuasiMetric(preset("sorgenfrey"))
    for y in (F(1, 2), F(-1), F(1, 1000), F(-1, 3), F(7, 3)):
        assert qm.qdist(0, y).exponent == brute_level(qm, F(0), y)


def test_asymmetry_on_sorgenfrey():
    qm = QuasiMetric(preset("sorgenfrey"))
    assert qm.qdist(0, F(1, 4)) == DyadicDistance(3)
    assert qm.qdist(F(1, 4), 0) == DyadicDistance(1)


def test_witness_families():
    qm = QuasiMetric(preset("sorgenfrey"))
    d, fam = qm.qdist_witness(0, -1)
    assert d.exponent <= qm.witness_level(0, -1)
    assert not fam.kind == "D"
    rl = QuasiMetric(preset("real-line"))
    d, fam = rl.qdist_witness(0, 10)
    assert fam.kind == "W" and fam.p < 0 < fam.q and not (fam.p < 10 < fam.q)


def test_ball_examples():
    s = QuasiMetric(preset("sorgenfrey"))
    assert s.ball(5, 0) == RSet.real()
    B = s.ball(0, 20)
    assert B.structurally_equal(min_nbhd_level(s.cover, s.dec, 20, 0))
    assert B.intervals[0].lo == 0 and B.intervals[0].lo_closed


@pytest.mark.parametrize("cover", [preset("hattori"), preset("sorgenfrey-left")] + fuzz_covers(13, 4))
def test_ball_membership_matches_distance(cover):
    qm = QuasiMetric(cover)
    xs = [F(k, 3) for k in range(-6, 7)] + list(cover.breakpoints)
    for x in xs[::2]:
        for n in (0, 1, 3, 7, 12):
            B = qm.ball(x, n)
            assert B.structurally_equal(min_nbhd_level(cover, qm.dec, n, x))
            for k in range(-20, 21):
                y = x + F(k, 2 ** (n % 5 + 2))
                assert B.member(y) == (qm.qdist(x, y).value < F(1, 2**n))


@pytest.mark.parametrize("cover", [preset(n) for n in ("real-line", "sorgenfrey", "discrete", "hattori")] + fuzz_covers(2, 6))
def test_axioms_hold(cover):
    rep = QuasiMetric(cover).check_axioms(42, 300)
    assert rep.checked == 300 and rep.ok, rep.violations[:3]


def test_axioms_zero_count():
    rep = QuasiMetric(preset("sorgenfrey")).check_axioms(42, 0)
    assert rep.checked == 0 and rep.ok


def test_corrupted_balls_are_caught():
    bad = CorruptQuasiMetric(preset("real-line"))
    assert bad.qdist(0, F(3, 5)) > max(bad.qdist(0, F(3, 10)), bad.qdist(F(3, 10), F(3, 5)))
    rep = bad.check_axioms(42, 500)
    assert not rep.ok and rep.violations[0]["check"] == "ultrametric"


def test_topology_agreement_on_fuzzed_cover():
    cover = fuzz_covers(17, 1)[0]
    qm = QuasiMetric(cover)
    for x in [F(k, 5) for k in range(-10, 11)]:
        for k in range(0, 13, 3):
            n = qm.ball_inside_basic(x, k)
            assert n is not None
        assert qm.basic_inside_ball(x, 10) is not None


def test_extractor_sorgenfrey_origin():
    qm = QuasiMetric(preset("sorgenfrey"))
    k, n = qm.extractor_cover(0, 64)
    assert qm.extractor_member(ExtractorParams(k, n), 0)
    assert not qm.extractor_member(ExtractorParams(k - 1, n), 0)
    # the window D_{n+1}(0) = [0, 2^-j) must contain q(k) and nothing earlier
    j = qm.j_index(0, n + 1)
    assert 0 < RATIONALS(k) < F(1, 2**j)


def test_extractor_generator_point():
    g = SeqGen(0, 1, F(1, 2), 1)
    qm = QuasiMetric(make_cover(piece_labels=[1], gen_overrides=[(g, 3)]))
    k, n = qm.extractor_cover(F(1, 4), 64)
    assert n <= 3


def test_extractor_errors():
    qm = QuasiMetric(preset("sorgenfrey"))
    with pytest.raises(BoundExhausted):
        qm.extractor_cover(0, 0)
    with pytest.raises(LabelError):
        QuasiMetric(preset("real-line")).extractor_member(ExtractorParams(3, 3), 0)


def test_extractor_first_condition_fails_for_two_sided_ball():
    bad = CorruptQuasiMetric(preset("sorgenfrey"))
    assert not bad.extractor_member(ExtractorParams(64, 3), 0)
