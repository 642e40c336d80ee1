import json
from fractions import Fraction as F

import pytest

from hybridline.cli.fuzz import FuzzSpec, fuzz_cover, fuzz_covers
from hybridline.cover import cover_loads, make_cover, preset
from hybridline.errors import OverlapError, ParseError, SearchExhausted
from hybridline.exactsets import RSet, SeqGen, parse_rset

HALF_GEN = SeqGen(0, 1, F(1, 2), 1)


def test_presets_are_the_named_spaces():
    assert preset("real-line").region(1) == RSet.real()
    assert preset("sorgenfrey").region(3) == RSet.real()
    assert preset("sorgenfrey-left").region(4) == RSet.real()
    assert preset("discrete").region(2) == RSet.real()
    with pytest.raises(ValueError, match="not representable"):
        preset("engelking-lutzer")


def test_duplicate_point_override_rejected():
    with pytest.raises(OverlapError):
        make_cover(piece_labels=[1], point_overrides=[(0, 2), (0, 3)])


def test_generator_through_breakpoint_rejected():
    with pytest.raises(OverlapError) as exc:
        make_cover([F(1, 4)], [1, 1, 1], gen_overrides=[(HALF_GEN, 3)])
    assert "breakpoint" in str(exc.value)


def test_label_precedence():
    c = make_cover(piece_labels=[1], point_overrides=[(0, 2)])
    assert c.label_of(0) == 2
    c = make_cover(piece_labels=[1], gen_overrides=[(HALF_GEN, 3)])
    assert c.label_of(F(1, 4)) == 3
    assert c.label_of(F(1, 5)) == 1
    c = make_cover([0], [1, 4, 3])
    assert [c.label_of(x) for x in (-1, 0, 1)] == [1, 4, 3]


def test_region_with_carveout():
    c = make_cover(piece_labels=[1], point_overrides=[(0, 2)])
    assert c.region(1) == RSet.real() - RSet.points([0])


@pytest.mark.parametrize("cover", [preset(n) for n in ("real-line", "hattori")] + fuzz_covers(3, 12))
def test_regions_partition_the_line(cover):
    regs = [cover.region(lab) for lab in (1, 2, 3, 4)]
    for i in range(4):
        for j in range(i + 1, 4):
            assert (regs[i] & regs[j]).is_empty()
    assert (regs[0] | regs[1] | regs[2] | regs[3]) == RSet.real()
    for x in [F(k, 6) for k in range(-24, 25)] + list(cover.breakpoints):
        lab = cover.label_of(x)
        assert all(regs[m - 1].member(x) == (m == lab) for m in (1, 2, 3, 4))


def test_local_base_shapes():
    assert preset("sorgenfrey").local_base_nbhd(0, 1).set == parse_rset("[0,1)")
    assert preset("sorgenfrey-left").local_base_nbhd(0, F(1, 2)).set == parse_rset("(-1/2,0]")
    assert preset("discrete").local_base_nbhd(0, 5).set == parse_rset("{0}")


def test_local_bases_are_nested():
    c = fuzz_covers(5, 1)[0]
    for x in (F(-1), F(0), F(1, 3)):
        sets = [c.local_base_nbhd(x, F(1, 2**k)).set for k in range(6)]
        assert all(x in s for s in sets)
        assert all(b <= a for a, b in zip(sets, sets[1:]))


def test_open_sampled():
    s = preset("sorgenfrey")
    assert s.is_open_sampled(parse_rset("[0,1)"), [0, F(1, 2)])
    assert s.is_open_sampled(RSet.real(), [5])
    with pytest.raises(SearchExhausted):
        s.is_open_sampled(parse_rset("(0,1]"), [1])


def test_hybrid_closure():
    c = make_cover([0], [4, 1, 3])
    # 0 is two-sided, so it joins the closure of (0,1)
    assert c.closure(parse_rset("(0,1)")) == parse_rset("[0,1)")
    assert c.is_closed(parse_rset("[0,1)"))


def test_json_round_trip():
    c = make_cover([F(-1, 2), 1], [1, 2, 3, 4, 1], [(F(3, 5), 2)], [(SeqGen(F(1, 4), 1, F(1, 3), 2), 4)])
    text = c.dumps()
    assert cover_loads(text).dumps() == text


def test_json_errors():
    with pytest.raises(ParseError) as exc:
        cover_loads(json.dumps({"breakpoints": ["0"], "piece_labels": [1, 2]}))
    assert exc.value.field == "piece_labels"
    with pytest.raises(ParseError):
        cover_loads("{not json")
    with pytest.raises(OverlapError):
        cover_loads(json.dumps({"piece_labels": [1], "point_overrides": [["0", 2], ["0", 3]]}))


def test_fuzz_is_deterministic_and_valid():
    assert fuzz_cover(FuzzSpec(seed=1)).dumps() == fuzz_cover(FuzzSpec(seed=1)).dumps()
    bare = fuzz_cover(FuzzSpec(0, 0, 0, seed=9))
    assert not bare.point_overrides and not bare.gen_overrides and not bare.breakpoints


def test_thousand_fuzzed_covers_validate():
    covers = fuzz_covers(11, 1000)
    assert len(covers) == 1000
    # fuzz_cover only returns covers that passed validation; reparsing validates again
    for c in covers[:200]:
        cover_loads(c.dumps())
