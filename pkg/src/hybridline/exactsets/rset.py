"""Finitely representable subsets of the real line.

An :class:`RSet` denotes ``(U | plus) - minus`` where ``U`` is a finite union
of disjoint intervals, ``plus`` is a countable set lying outside ``U`` and
``minus`` is a countable set lying inside ``U``. Countable parts are built
from explicit points and :class:`SeqGen` sequences. Every public constructor
and operation returns the canonical form: ``U`` consists of maximal intervals
whose finite endpoints are closed exactly when they belong to the set.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional, Union

from .numbers import INF, NINF, Value, fmt
from .seqgen import SeqGen, gen_diff, gen_inter, remove_indices

Atom = Union[Fraction, SeqGen]

R, SRIGHT, SLEFT = "R", "Sright", "Sleft"
TOPOLOGIES = (R, SRIGHT, SLEFT)


@dataclass(frozen=True, order=True)
class Interval:
    lo: Value
    hi: Value
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"degenerate interval {self.lo}..{self.hi}")
        if self.lo == NINF and self.lo_closed or self.hi == INF and self.hi_closed:
            raise ValueError("infinite endpoints are never closed")

    def __contains__(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo:
            return self.lo_closed
        if x == self.hi:
            return self.hi_closed
        return True

    def negate(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.hi_closed, self.lo_closed)

    def text(self) -> str:
        return "{}{},{}{}".format(
            "[" if self.lo_closed else "(", fmt(self.lo), fmt(self.hi), "]" if self.hi_closed else ")"
        )

    def __repr__(self):
        return self.text()


@dataclass(frozen=True)
class SupResult:
    value: Optional[Value]
    attained: bool
    nonempty: bool


# ---------------------------------------------------------------------------
# atom algebra


def _atom_in(atom: Atom, x: Fraction) -> bool:
    if isinstance(atom, SeqGen):
        return atom.member(x) is not None
    return atom == x


def _flatten(pts, gens) -> list[Atom]:
    return list(pts) + list(gens)


def _atom_diff(a: Atom, b: Atom) -> list[Atom]:
    if isinstance(a, SeqGen):
        if isinstance(b, SeqGen):
            return _flatten(*gen_diff(a, b))
        k = a.member(b)
        if k is None:
            return [a]
        return _flatten(*remove_indices(a, [k]))
    return [] if _atom_in(b, a) else [a]


def _atom_inter(a: Atom, b: Atom) -> list[Atom]:
    if isinstance(a, SeqGen):
        if isinstance(b, SeqGen):
            return _flatten(*gen_inter(a, b))
        return [b] if a.member(b) is not None else []
    return [a] if _atom_in(b, a) else []


def _subtract_all(atoms: Iterable[Atom], others: list[Atom]) -> list[Atom]:
    out = []
    for a in atoms:
        parts = [a]
        for b in others:
            parts = [q for p in parts for q in _atom_diff(p, b)]
            if not parts:
                break
        out.extend(parts)
    return out


def _remove_point(atoms: list[Atom], v: Fraction) -> bool:
    for i, a in enumerate(atoms):
        if isinstance(a, SeqGen):
            k = a.member(v)
            if k is not None:
                atoms[i : i + 1] = _flatten(*remove_indices(a, [k]))
                return True
        elif a == v:
            del atoms[i]
            return True
    return False


class _Line:
    """Membership oracle for a sorted list of disjoint intervals."""

    __slots__ = ("ivs", "los", "bvals")

    def __init__(self, ivs: tuple[Interval, ...]):
        self.ivs = ivs
        self.los = [iv.lo for iv in ivs]
        vals = set()
        for iv in ivs:
            if iv.lo != NINF:
                vals.add(iv.lo)
            if iv.hi != INF:
                vals.add(iv.hi)
        self.bvals = sorted(vals)

    def __contains__(self, x) -> bool:
        i = bisect.bisect_right(self.los, x) - 1
        return i >= 0 and x in self.ivs[i]

    def split(self, atom: Atom) -> list[tuple[Atom, bool]]:
        if not isinstance(atom, SeqGen):
            return [(atom, atom in self)]
        g = atom
        a = g.a
        if g.c > 0:
            nxt = [v for v in self.bvals if v > a]
            delta = (nxt[0] - a) if nxt else INF
            probe = a + (delta / 2 if nxt else 1)
        else:
            prv = [v for v in self.bvals if v < a]
            delta = (a - prv[-1]) if prv else INF
            probe = a - (delta / 2 if prv else 1)
        tail_inside = probe in self
        k = g.tail_start(delta)
        out: list[tuple[Atom, bool]] = [(p, p in self) for _, p in g.points(k)]
        out.append((g.from_index(k), tail_inside))
        return out


def _build_line(bvals, open_val, point_val):
    """Maximal intervals from piece memberships; returns (intervals, isolated points)."""
    ivs: list[Interval] = []
    isolated: list[Fraction] = []
    cur = (NINF, False) if open_val(0) else None
    for i, v in enumerate(bvals):
        pv = point_val(i, v)
        right = open_val(i + 1)
        if cur is not None:
            if right:
                continue
            ivs.append(Interval(cur[0], v, cur[1], pv))
            cur = None
        elif right:
            cur = (v, pv)
        elif pv:
            isolated.append(v)
    if cur is not None:
        ivs.append(Interval(cur[0], INF, cur[1], False))
    return tuple(ivs), isolated


def _piece_probe(bvals, i):
    if not bvals:
        return Fraction(0)
    if i == 0:
        return bvals[0] - 1
    if i == len(bvals):
        return bvals[-1] + 1
    return (bvals[i - 1] + bvals[i]) / 2


def _sort_atoms(atoms: Iterable[Atom]):
    pts = sorted({a for a in atoms if not isinstance(a, SeqGen)})
    gens = sorted({a for a in atoms if isinstance(a, SeqGen)})
    return tuple(pts), tuple(gens)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RSet:
    intervals: tuple[Interval, ...] = ()
    points_plus: tuple[Fraction, ...] = ()
    gens_plus: tuple[SeqGen, ...] = ()
    points_minus: tuple[Fraction, ...] = ()
    gens_minus: tuple[SeqGen, ...] = ()

    # -- constructors -------------------------------------------------------

    @classmethod
    def empty(cls) -> "RSet":
        return cls()

    @classmethod
    def real(cls) -> "RSet":
        return cls((Interval(NINF, INF),))

    @classmethod
    def interval(cls, lo, hi, lo_closed=False, hi_closed=False) -> "RSet":
        lo = lo if lo in (INF, NINF) else Fraction(lo)
        hi = hi if hi in (INF, NINF) else Fraction(hi)
        lo_closed = lo_closed and lo != NINF
        hi_closed = hi_closed and hi != INF
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            return cls()
        if lo == hi:
            return cls.points([lo])
        return cls((Interval(lo, hi, lo_closed, hi_closed),))

    @classmethod
    def closed(cls, lo, hi) -> "RSet":
        return cls.interval(lo, hi, True, True)

    @classmethod
    def open(cls, lo, hi) -> "RSet":
        return cls.interval(lo, hi)

    @classmethod
    def closed_open(cls, lo, hi) -> "RSet":
        return cls.interval(lo, hi, True, False)

    @classmethod
    def open_closed(cls, lo, hi) -> "RSet":
        return cls.interval(lo, hi, False, True)

    @classmethod
    def points(cls, pts: Iterable) -> "RSet":
        return cls(points_plus=tuple(sorted({Fraction(p) for p in pts})))

    @classmethod
    def gen(cls, g: SeqGen) -> "RSet":
        return cls(gens_plus=(g,))

    @classmethod
    def union_of_intervals(cls, ivs: Iterable[Interval]) -> "RSet":
        """Canonical union of non-degenerate intervals by a single sweep."""
        ivs = sorted(ivs, key=lambda iv: (iv.lo, not iv.lo_closed))
        merged: list[list] = []
        holes: list[Fraction] = []
        for iv in ivs:
            if merged:
                cur = merged[-1]
                if iv.lo < cur[1] or (iv.lo == cur[1] and (cur[3] or iv.lo_closed)):
                    if iv.hi > cur[1] or (iv.hi == cur[1] and iv.hi_closed):
                        cur[1], cur[3] = iv.hi, iv.hi_closed
                    continue
                if iv.lo == cur[1]:
                    # open ends meeting: one interval with the shared end carved out
                    holes.append(iv.lo)
                    cur[1], cur[3] = iv.hi, iv.hi_closed
                    continue
            merged.append([iv.lo, iv.hi, iv.lo_closed, iv.hi_closed])
        return cls(tuple(Interval(*m) for m in merged), points_minus=tuple(holes))

    @classmethod
    def from_parts(cls, intervals=(), points_plus=(), gens_plus=(), points_minus=(), gens_minus=()):
        """Canonical set for ``(intervals | points_plus | gens_plus) - (points_minus | gens_minus)``."""
        pieces = [cls((iv,)) for iv in intervals]
        pieces.append(cls.points(points_plus))
        pieces.extend(cls.gen(g) for g in gens_plus)
        out = union_all(pieces)
        cut = union_all([cls.points(points_minus)] + [cls.gen(g) for g in gens_minus])
        return out - cut

    # -- structure ----------------------------------------------------------

    @cached_property
    def _line(self) -> _Line:
        return _Line(self.intervals)

    def plus_atoms(self) -> list[Atom]:
        return list(self.points_plus) + list(self.gens_plus)

    def minus_atoms(self) -> list[Atom]:
        return list(self.points_minus) + list(self.gens_minus)

    def is_empty(self) -> bool:
        return not self.intervals and not self.points_plus and not self.gens_plus

    def is_countable(self) -> bool:
        return not self.intervals

    def is_bounded(self) -> bool:
        if self.intervals and (self.intervals[0].lo == NINF or self.intervals[-1].hi == INF):
            return False
        return True

    def __contains__(self, x) -> bool:
        return self.member(x)

    def member(self, x) -> bool:
        x = Fraction(x)
        if x in self.points_minus or any(g.member(x) is not None for g in self.gens_minus):
            return False
        if x in self.points_plus or any(g.member(x) is not None for g in self.gens_plus):
            return True
        return x in self._line

    # -- boolean algebra ----------------------------------------------------

    def __or__(self, other: "RSet") -> "RSet":
        return combine(self, other, lambda s, t: s or t)

    def __and__(self, other: "RSet") -> "RSet":
        return combine(self, other, lambda s, t: s and t)

    def __sub__(self, other: "RSet") -> "RSet":
        return combine(self, other, lambda s, t: s and not t)

    def __xor__(self, other: "RSet") -> "RSet":
        return combine(self, other, lambda s, t: s != t)

    def complement(self) -> "RSet":
        return RSet.real() - self

    def issubset(self, other: "RSet") -> bool:
        return (self - other).is_empty()

    __le__ = issubset

    def __eq__(self, other) -> bool:
        if not isinstance(other, RSet):
            return NotImplemented
        if self.intervals != other.intervals:
            return False
        return (self ^ other).is_empty()

    def __hash__(self):
        # intervals of the canonical form are determined by the denoted set
        return hash(self.intervals)

    def structurally_equal(self, other: "RSet") -> bool:
        return self.text() == other.text()

    def negate(self) -> "RSet":
        return RSet(
            tuple(iv.negate() for iv in reversed(self.intervals)),
            tuple(sorted(-p for p in self.points_plus)),
            tuple(sorted(g.negate() for g in self.gens_plus)),
            tuple(sorted(-p for p in self.points_minus)),
            tuple(sorted(g.negate() for g in self.gens_minus)),
        )

    def shift(self, d) -> "RSet":
        d = Fraction(d)
        sh = lambda v: v if v in (INF, NINF) else v + d  # noqa: E731
        return RSet(
            tuple(Interval(sh(iv.lo), sh(iv.hi), iv.lo_closed, iv.hi_closed) for iv in self.intervals),
            tuple(p + d for p in self.points_plus),
            tuple(SeqGen(g.a + d, g.c, g.r, g.k0) for g in self.gens_plus),
            tuple(p + d for p in self.points_minus),
            tuple(SeqGen(g.a + d, g.c, g.r, g.k0) for g in self.gens_minus),
        )

    # -- order queries ------------------------------------------------------

    def sup_below(self, t) -> SupResult:
        """``sup(S & (-inf, t])`` with attainment."""
        t = Fraction(t)
        best: Optional[Value] = None

        def offer(v):
            nonlocal best
            if best is None or v > best:
                best = v

        for iv in self.intervals:
            if iv.lo < t or (iv.lo == t and iv.lo_closed):
                offer(iv.hi if iv.hi <= t else t)
        for p in self.points_plus:
            if p <= t:
                offer(p)
        for g in self.gens_plus:
            if g.increasing:
                if g.a <= t:
                    offer(g.a)
                else:
                    last = None
                    for _, p in g.points():
                        if p > t:
                            break
                        last = p
                    if last is not None:
                        offer(last)
            elif g.a < t:
                for _, p in g.points():
                    if p <= t:
                        offer(p)
                        break
        if best is None:
            return SupResult(None, False, False)
        attained = best not in (INF, NINF) and self.member(best)
        return SupResult(best, attained, True)

    def inf_above(self, t) -> SupResult:
        """``inf(S & [t, +inf))`` with attainment."""
        res = self.negate().sup_below(-Fraction(t))
        if not res.nonempty:
            return res
        return SupResult(-res.value, res.attained, True)

    def sample_point(self) -> Optional[Fraction]:
        """Some member of the set, or None when empty."""
        if self.points_plus:
            return self.points_plus[0]
        if self.gens_plus:
            g = self.gens_plus[0]
            return g.point(g.k0)
        for iv in self.intervals:
            lo, hi = iv.lo, iv.hi
            if lo == NINF and hi == INF:
                cands = [Fraction(0)]
            elif lo == NINF:
                cands = [hi - 1]
            elif hi == INF:
                cands = [lo + 1]
            else:
                cands = [(lo + hi) / 2]
            base = cands[0]
            span = (hi - lo) if lo != NINF and hi != INF else Fraction(1)
            for i in range(1, 200):
                cands.append(base + span / (3 * 2**i) * (1 if i % 2 else -1) / 2)
            for c in cands:
                if self.member(c):
                    return c
        if self.intervals:
            raise AssertionError("interval part has no sampled member")
        return None

    # -- topology -----------------------------------------------------------

    def closure(self, top: str = R) -> "RSet":
        if top not in TOPOLOGIES:
            raise ValueError(f"unknown topology {top!r}")
        extra: list[Fraction] = []
        for iv in self.intervals:
            if iv.lo != NINF and top in (R, SRIGHT):
                extra.append(iv.lo)
            if iv.hi != INF and top in (R, SLEFT):
                extra.append(iv.hi)
        for g in self.gens_plus:
            if top == R or (top == SRIGHT and not g.increasing) or (top == SLEFT and g.increasing):
                extra.append(g.a)
        body = RSet(self.intervals, self.points_plus, self.gens_plus)
        return body | RSet.points(extra)

    def is_closed(self, top: str = R) -> bool:
        return self.closure(top).issubset(self)

    # -- text ---------------------------------------------------------------

    def text(self) -> str:
        parts = [iv.text() for iv in self.intervals]
        if self.points_plus:
            parts.append("{" + ",".join(fmt(p) for p in self.points_plus) + "}")
        parts.extend(g.text() for g in self.gens_plus)
        if self.points_minus:
            parts.append("minus {" + ",".join(fmt(p) for p in self.points_minus) + "}")
        parts.extend("minus " + g.text() for g in self.gens_minus)
        return " ".join(parts) if parts else "{}"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"RSet({self.text()!r})"

    def iter_points(self) -> Iterator[Fraction]:
        """Points of a countable set: explicit points first, then generators round-robin."""
        if self.intervals:
            raise ValueError("set is uncountable")
        yield from self.points_plus
        its = [g.points() for g in self.gens_plus]
        while its:
            for it in its:
                yield next(it)[1]


def union_all(sets: Iterable[RSet]) -> RSet:
    # pairwise rounds keep the operands balanced in size
    layer = [s for s in sets if not s.is_empty()]
    if not layer:
        return RSet()
    while len(layer) > 1:
        layer = [layer[i] | layer[i + 1] if i + 1 < len(layer) else layer[i] for i in range(0, len(layer), 2)]
    return layer[0]


# ---------------------------------------------------------------------------


def combine(S: RSet, T: RSet, op: Callable[[bool, bool], bool]) -> RSet:
    lS, lT = S._line, T._line
    xs = S.plus_atoms() + S.minus_atoms()
    xt = T.plus_atoms() + T.minus_atoms()

    pieces: list[tuple[Atom, bool, bool]] = []
    if xs and xt:
        pieces += [(a, True, False) for a in _subtract_all(xs, xt)]
        pieces += [(b, False, True) for b in _subtract_all(xt, xs)]
        for a in xs:
            for b in xt:
                pieces += [(c, True, True) for c in _atom_inter(a, b)]
    else:
        pieces += [(a, True, False) for a in xs]
        pieces += [(b, False, True) for b in xt]

    xr: list[Atom] = []
    for atom, in_xs, in_xt in pieces:
        for a1, us in lS.split(atom):
            for a2, ut in lT.split(a1):
                if op(us != in_xs, ut != in_xt) != op(us, ut):
                    xr.append(a2)

    bvals = sorted(set(lS.bvals) | set(lT.bvals))

    def open_val(i):
        p = _piece_probe(bvals, i)
        return op(p in lS, p in lT)

    def point_val(i, v):
        return op(S.member(v), T.member(v))

    ivs, _isolated = _build_line(bvals, open_val, point_val)
    line = _Line(ivs)
    for v in bvals:
        if (v in line) != op(v in lS, v in lT):
            if not _remove_point(xr, v):
                xr.append(v)

    plus, minus = [], []
    for atom in xr:
        for a, inside in line.split(atom):
            (minus if inside else plus).append(a)
    pp, gp = _sort_atoms(plus)
    pm, gm = _sort_atoms(minus)
    return RSet(ivs, pp, gp, pm, gm)


def rset_boolean(op: str, S: RSet, T: RSet) -> RSet:
    if op == "union":
        return S | T
    if op in ("intersect", "intersection"):
        return S & T
    if op in ("diff", "difference"):
        return S - T
    raise ValueError(f"unknown boolean op {op!r}")


def closure(S: RSet, top: str = R) -> RSet:
    return S.closure(top)
