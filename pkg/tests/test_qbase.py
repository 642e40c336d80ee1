from fractions import Fraction as F

import pytest

from hybridline.cli.fuzz import fuzz_covers
from hybridline.cover import make_cover, preset
from hybridline.decompose import Decomposition, synthesize_decomposition
from hybridline.exactsets import RSet, parse_rset
from hybridline.qbase import (
    RATIONALS,
    D,
    RationalEnum,
    U,
    V,
    W,
    calkin_wilf,
    calkin_wilf_successor,
    fusc,
    level_descriptors,
    min_nbhd_family,
    min_nbhd_level,
    verify_interior_preserving,
)


def test_fusc_start():
    assert [fusc(n) for n in range(10)] == [0, 1, 1, 2, 1, 3, 2, 3, 1, 4]


def test_enumeration_matches_successor_recurrence():
    cw = F(1)
    for m in range(1, 2000):
        assert calkin_wilf(m) == cw
        cw = calkin_wilf_successor(cw)


def test_enumeration_layout_and_inverse():
    q = RationalEnum()
    assert q(0) == 0
    assert [q(i) for i in range(1, 7)] == [1, -1, F(1, 2), F(-1, 2), 2, -2]
    seen = set()
    for i in range(5000):
        v = q(i)
        assert RationalEnum.index(v) == i
        seen.add(v)
    assert len(seen) == 5000


def test_prefix_is_cached_and_consistent():
    assert RATIONALS.prefix(10) == [RATIONALS(i) for i in range(11)]


def test_family_examples():
    s = preset("sorgenfrey")
    d = synthesize_decomposition(s)
    assert min_nbhd_family(s, d, W(-1, 1), 0) == RSet.open(-1, 1)
    assert d.F(5) == RSet.closed(-5, 5)
    assert min_nbhd_family(s, d, U(1, 5), 0) == parse_rset("[0,1)")
    assert min_nbhd_family(s, d, V(0, 3), -1) == RSet.real()
    assert min_nbhd_family(s, d, W(1, 0), 0) == RSet.real()
    disc = preset("discrete")
    assert min_nbhd_family(disc, synthesize_decomposition(disc), D(), 0) == parse_rset("{0}")


def test_level_zero():
    s = preset("sorgenfrey")
    d = synthesize_decomposition(s)
    assert min_nbhd_level(s, d, 0, 3) == RSet.real()
    disc = preset("discrete")
    assert min_nbhd_level(disc, synthesize_decomposition(disc), 0, 3) == parse_rset("{3}")


def test_sorgenfrey_kernel_is_half_open():
    s = preset("sorgenfrey")
    M = min_nbhd_level(s, synthesize_decomposition(s), 20, 0)
    assert len(M.intervals) == 1
    iv = M.intervals[0]
    assert iv.lo == 0 and iv.lo_closed and not iv.hi_closed and iv.hi > 0


def test_level_descriptors_use_dyadic_grid():
    fams = level_descriptors(3, F(1, 3))
    assert fams == [W(F(1, 4), F(1, 2)), U(F(1, 2), 2), V(F(1, 4), 2)]
    assert level_descriptors(0, 5) == [D()]


@pytest.mark.parametrize("cover", [preset("hattori")] + fuzz_covers(4, 5))
def test_kernel_nesting_centering_transitivity(cover):
    d = synthesize_decomposition(cover)
    xs = sorted({F(k, 4) for k in range(-12, 13)} | set(cover.breakpoints))
    for x in xs[::3]:
        prev = None
        for n in range(8):
            M = min_nbhd_level(cover, d, n, x)
            assert M.member(x)
            if prev is not None:
                assert M <= prev
            prev = M
        for z in xs:
            if prev.member(z):
                assert min_nbhd_level(cover, d, 7, z) <= prev


@pytest.mark.parametrize("cover", [preset("sorgenfrey"), preset("hattori")] + fuzz_covers(8, 4))
def test_interior_preserving_on_synthesized(cover):
    d = synthesize_decomposition(cover)
    probes = [F(k, 3) for k in range(-9, 10)] + list(cover.breakpoints)
    for f in (W(-1, 1), U(1, 2), U(F(1, 2), 4), V(-1, 2), V(0, 5), D()):
        assert verify_interior_preserving(cover, d, f, probes).ok


def test_interior_preserving_leak_is_witnessed():
    c = make_cover([0, 1], [1, 3, 3, 1, 1])
    bad = Decomposition(c, lambda n: parse_rset("[0,1)"), lambda n: RSet.empty())
    # the closed end 1 of F(0) would be needed in A2 or A3, but it is label 1
    rep = verify_interior_preserving(c, bad, U(2, 0), [F(3, 2)])
    assert not rep.ok
    assert rep.failures[0]["endpoint"] == "1" and rep.failures[0]["label"] == 1
