"""Exact rational arithmetic and representable subsets of the real line."""

from .numbers import INF, NINF, fmt, parse_rational, parse_value
from .rset import R, SLEFT, SRIGHT, TOPOLOGIES, Interval, RSet, SupResult, closure, rset_boolean, union_all
from .seqgen import SeqGen
from .text import format_rset, parse_gen, parse_rset


def rset_member(S: RSet, x) -> bool:
    return S.member(x)


def seq_member(g: SeqGen, x):
    return g.member(parse_rational(x))


def rset_sup_below(S: RSet, t) -> SupResult:
    return S.sup_below(t)


def rset_inf_above(S: RSet, t) -> SupResult:
    return S.inf_above(t)


def is_countable(S: RSet) -> bool:
    return S.is_countable()


__all__ = [
    "INF",
    "NINF",
    "R",
    "SLEFT",
    "SRIGHT",
    "TOPOLOGIES",
    "Interval",
    "RSet",
    "SeqGen",
    "SupResult",
    "closure",
    "fmt",
    "format_rset",
    "is_countable",
    "parse_gen",
    "parse_rational",
    "parse_rset",
    "parse_value",
    "rset_boolean",
    "rset_inf_above",
    "rset_member",
    "rset_sup_below",
    "seq_member",
    "union_all",
]
