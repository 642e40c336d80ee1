"""Command line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from ..cover import PRESETS, FourCover, cover_loads, preset
from ..decompose import classify, synthesize_decomposition, validate_decomposition
from ..errors import HybridLineError
from ..exactsets import TOPOLOGIES, fmt, parse_rational, parse_rset
from ..qbase import level_descriptors, min_nbhd_family, min_nbhd_level
from ..qmetric import QuasiMetric
from ..rng import SplitMix64
from ..separation import check_normality, sep_nbhd, urysohn_eval, urysohn_spec
from .fuzz import FuzzSpec, fuzz_cover, fuzz_covers
from .suite import SUITES, SuiteConfig, _sample_members, dumps_report, run_suite

DEFAULT_FUZZED = 10


def load_cover(arg: str) -> FourCover:
    """A preset name or a path to a cover JSON file."""
    if arg in PRESETS or not Path(arg).exists():
        return preset(arg)
    return cover_loads(Path(arg).read_text(), name=Path(arg).stem)


def _q(s: str) -> Fraction:
    return parse_rational(s)


def cmd_validate(args):
    cov = load_cover(args.cover)
    sys.stdout.write(cov.dumps())


def cmd_member(args):
    print(load_cover(args.cover).label_of(_q(args.x)))


def cmd_region(args):
    print(load_cover(args.cover).region(args.label).text())


def cmd_nbhd(args):
    print(load_cover(args.cover).local_base_nbhd(_q(args.x), _q(args.eps)).set.text())


def cmd_closure(args):
    cov = load_cover(args.cover)
    S = parse_rset(args.set)
    print(cov.closure(S).text() if args.top == "hybrid" else S.closure(args.top).text())


def cmd_decompose(args):
    cov = load_cover(args.cover)
    dec = synthesize_decomposition(cov)
    for n in range(args.levels + 1):
        print(json.dumps({"n": n, "F": dec.F(n).text(), "H": dec.H(n).text()}))
    rep = validate_decomposition(cov, dec, args.levels)
    print(json.dumps({"valid": rep.ok, "violation": rep.first.as_dict() if rep.first else None}))
    return 0 if rep.ok else 1


def cmd_base(args):
    cov = load_cover(args.cover)
    dec = synthesize_decomposition(cov)
    x = _q(args.x)
    for level in range(args.levels + 1):
        fams = level_descriptors(level, x)
        mins = " ".join(f"{f}:{min_nbhd_family(cov, dec, f, x).text()}" for f in fams)
        print(f"{level}\t{mins}\tM={min_nbhd_level(cov, dec, level, x).text()}")


def cmd_qdist(args):
    qm = QuasiMetric(load_cover(args.cover))
    d, fam = qm.qdist_witness(_q(args.x), _q(args.y))
    if args.max_level is not None and d.exponent is not None and d.exponent > args.max_level:
        print(f"separating level {d.exponent} exceeds --max-level {args.max_level}", file=sys.stderr)
        return 3
    print(d.text() if fam is None else f"{d.text()} {fam.text()}")


def cmd_ball(args):
    print(QuasiMetric(load_cover(args.cover)).ball(_q(args.x), args.n).text())


def default_covers(seed: int, fuzzed: int) -> list[FourCover]:
    return [preset(name) for name in PRESETS] + fuzz_covers(seed, fuzzed)


def cmd_check(args):
    covers = [load_cover(c) for c in args.covers] if args.covers else default_covers(args.seed, args.fuzzed)
    cfg = SuiteConfig(args.suite, args.seed, args.samples, args.levels, args.corrupt_decomposition)
    code, records = run_suite(cfg, covers)
    text = dumps_report(records)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    bad = [r for r in records if r["status"] == "fail"]
    for r in bad:
        print(f"FAIL {r['suite']} {r['cover_id']} {r['check']}: {r['witness']}", file=sys.stderr)
    return code


def cmd_separate(args):
    cov = load_cover(args.cover)
    C0, C1 = parse_rset(args.c0), parse_rset(args.c1)
    rng = SplitMix64(args.seed)
    s0, s1 = _sample_members(C0, rng, args.samples), _sample_members(C1, rng, args.samples)
    rep = check_normality(cov, C0, C1, s0, s1)
    if rep.precondition:
        print(f"precondition: {rep.precondition}", file=sys.stderr)
        return 2
    for c in s0:
        u = sep_nbhd(cov, c, C1)
        print(f"U0({fmt(c)}) n={u.n_of_c} {u.set.text()}")
    for c in s1:
        u = sep_nbhd(cov, c, C0)
        print(f"U1({fmt(c)}) n={u.n_of_c} {u.set.text()}")
    print("disjoint" if rep.ok else f"overlap: {rep.failures[0]}")
    return 0 if rep.ok else 1


def cmd_urysohn(args):
    cov = load_cover(args.cover)
    spec = urysohn_spec(cov, _q(args.x), parse_rset(args.set), eps=args.eps)
    print(f"eps={fmt(spec.eps)} label={spec.label}")
    for t in args.eval.split(","):
        print(f"{t.strip()}\t{fmt(urysohn_eval(spec, _q(t)))}")


def cmd_classify(args):
    print(json.dumps(classify(load_cover(args.cover)).as_dict(), sort_keys=True))


def cmd_fuzz(args):
    spec = FuzzSpec(args.max_breakpoints, args.max_point_overrides, args.max_gen_overrides, args.seed)
    sys.stdout.write(fuzz_cover(spec).dumps())


def cmd_plot_data(args):
    qm = QuasiMetric(load_cover(args.cover))
    x, lo, hi = _q(args.x), _q(args.lo), _q(args.hi)
    print("y,rho")
    for i in range(args.steps + 1):
        y = lo + (hi - lo) * Fraction(i, args.steps)
        print(f"{fmt(y)},{qm.qdist(x, y).text()}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hybridline", description="Exact hybrid Sorgenfrey topologies and their quasi-metrics.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *positional):
        sp = sub.add_parser(name, help=help_)
        for pos in positional:
            sp.add_argument(pos)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "validate a cover and print it canonically", "cover")
    add("member", cmd_member, "label of a point", "cover", "x")
    sp = add("region", cmd_region, "region of one label", "cover")
    sp.add_argument("label", type=int, choices=(1, 2, 3, 4))
    add("nbhd", cmd_nbhd, "basic neighbourhood", "cover", "x", "eps")
    sp = add("closure", cmd_closure, "closure of a set", "cover", "set")
    sp.add_argument("--top", default="hybrid", choices=("hybrid",) + TOPOLOGIES)
    sp = add("decompose", cmd_decompose, "print and validate the synthesized decomposition", "cover")
    sp.add_argument("--levels", type=int, default=3)
    sp = add("base", cmd_base, "minimal neighbourhoods level by level", "cover", "x")
    sp.add_argument("--levels", type=int, default=8)
    sp = add("qdist", cmd_qdist, "quasi-distance and the separating family", "cover", "x", "y")
    sp.add_argument("--max-level", type=int, default=None)
    sp = add("ball", cmd_ball, "ball of radius 2^-n", "cover", "x")
    sp.add_argument("n", type=int)
    sp = sub.add_parser("check", help="run property suites")
    sp.add_argument("covers", nargs="*")
    sp.add_argument("--suite", default="all", choices=("all",) + SUITES)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--levels", type=int, default=24)
    sp.add_argument("--fuzzed", type=int, default=DEFAULT_FUZZED, help="fuzzed covers added when none are given")
    sp.add_argument("--report", default=None)
    sp.add_argument("--corrupt-decomposition", action="store_true")
    sp.set_defaults(func=cmd_check)
    sp = add("separate", cmd_separate, "separating neighbourhoods of two closed sets", "cover")
    sp.add_argument("--c0", required=True)
    sp.add_argument("--c1", required=True)
    sp.add_argument("--samples", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("urysohn", cmd_urysohn, "evaluate a Urysohn function", "cover")
    sp.add_argument("--set", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--eps", default=None)
    sp.add_argument("--eval", required=True)
    add("classify", cmd_classify, "metrizability verdicts", "cover")
    sp = sub.add_parser("fuzz", help="print a fuzzed cover")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-breakpoints", type=int, default=4)
    sp.add_argument("--max-point-overrides", type=int, default=3)
    sp.add_argument("--max-gen-overrides", type=int, default=2)
    sp.set_defaults(func=cmd_fuzz)
    sp = add("plot-data", cmd_plot_data, "CSV of (y, rho(x, y))", "cover", "x")
    sp.add_argument("--from", dest="lo", default="-1")
    sp.add_argument("--to", dest="hi", default="1")
    sp.add_argument("--steps", type=int, default=64)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args) or 0
    except (HybridLineError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
