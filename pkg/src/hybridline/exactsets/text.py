"""Canonical textual form of representable sets.

Terms are separated by whitespace (``U`` and ``|`` are accepted as
separators too)::

    [0,1) (2,inf) {3,7/2} gen(0;1;1/2;1) minus {1/2} minus gen(1;-1;1/3;2)
"""

from __future__ import annotations

import re

from ..errors import ParseError
from .numbers import parse_rational, parse_value
from .rset import RSet
from .seqgen import SeqGen

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<minus>minus\b)
      | (?P<sep>U\b|\||∪)
      | (?P<iv>[\[(]\s*[^,\s\[\]()]+\s*,\s*[^,\s\[\]()]+\s*[\])])
      | (?P<pts>\{[^}]*\})
      | (?P<gen>gen\([^)]*\))
    )""",
    re.VERBOSE,
)


def parse_gen(text: str) -> SeqGen:
    body = text.strip()
    if body.startswith("gen(") and body.endswith(")"):
        body = body[4:-1]
    fields = [f.strip() for f in body.split(";")]
    if len(fields) != 4:
        raise ParseError(f"generator needs 4 fields a;c;r;k0, got {text!r}")
    try:
        return SeqGen(
            parse_rational(fields[0]), parse_rational(fields[1]), parse_rational(fields[2]), int(fields[3])
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_rset(text: str) -> RSet:
    pos = 0
    text = text.strip()
    intervals, pplus, gplus, pminus, gminus = [], [], [], [], []
    negate_next = False
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at offset {pos}: {text[pos:pos + 20]!r}")
        pos = m.end()
        kind = m.lastgroup
        tok = m.group(kind).strip()
        if kind == "sep":
            continue
        if kind == "minus":
            if negate_next:
                raise ParseError("'minus' must be followed by a term")
            negate_next = True
            continue
        try:
            if kind == "iv":
                lo_s, hi_s = tok[1:-1].split(",")
                lo, hi = parse_value(lo_s), parse_value(hi_s)
                piece = RSet.interval(lo, hi, tok[0] == "[", tok[-1] == "]")
                if negate_next:
                    pminus.append(piece)
                else:
                    intervals.append(piece)
            elif kind == "pts":
                inner = tok[1:-1].strip()
                vals = [parse_rational(v) for v in inner.split(",")] if inner else []
                (pminus if negate_next else pplus).append(RSet.points(vals))
            else:
                g = parse_gen(tok)
                (gminus if negate_next else gplus).append(RSet.gen(g))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        negate_next = False
    if negate_next:
        raise ParseError("dangling 'minus'")
    out = RSet()
    for piece in intervals + pplus + gplus:
        out = out | piece
    for piece in pminus + gminus:
        out = out - piece
    return out


def format_rset(s: RSet) -> str:
    return s.text()
