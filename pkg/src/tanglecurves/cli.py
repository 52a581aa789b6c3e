"""Command-line interface.

Commands:
    pair <a> <b>          bigraded generator table of the summed pairing
    hfk <a> <b>           knot Floer homology of the glued tangles
    lspace-check <a> <b>  staircase verdict and obstruction certificate
    split-check <a>       split-tangle detection
    verify-lemmas         sweep the closed-form pairings against the engine

Curve arguments are builtin names (rational:<p>/<q>, pretzel:2,-3) or paths
to curve specification files.  Flags: --format table|json, --strict,
--certificate.  Exit codes: 0 success, 1 usage/parse error, 2 validation
failure, 3 internal assertion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .model import (
    BigradedSpace,
    InternalAssertionError,
    Multicurve,
    NotDivisibleError,
    ValidationError,
)
from . import lspace, pairing, specfile
from .specfile import ParseError


def _load_curve(arg: str, strict: bool) -> Multicurve:
    if arg.startswith(("rational:", "pretzel:")):
        m = specfile.builtin_curve(arg)
    elif os.path.exists(arg):
        with open(arg, "r", encoding="utf-8") as fh:
            m = specfile.parse_curvespec(fh.read())
    else:
        raise ParseError(0, f"no such builtin or file: {arg!r}")
    problems = m.validate(strict=strict)
    for p in problems:
        print(f"warning: {p}", file=sys.stderr)
    return m


def _normalized(space: BigradedSpace) -> BigradedSpace:
    return space.normalized()


def _generator_rows(space: BigradedSpace):
    return [dict(alex=str(g.alex), delta=str(g.delta), source_pair=g.tag)
            for g in space.generators]


def _print_table(space: BigradedSpace, title: str):
    print(title)
    print(f"  dimension {space.dimension}")
    print("  alex   delta  source")
    for g in space.generators:
        print(f"  {str(g.alex):>5}  {str(g.delta):>5}  {g.tag}")


def _gap_diagram(space: BigradedSpace) -> str:
    """Alexander-line diagram: a bullet for each occupied grading."""
    if space.is_zero():
        return "  (empty)"
    support = space.alex_support()
    lo, hi = support[0], support[-1]
    marks = []
    labels = []
    from collections import Counter

    counts = Counter(g.alex for g in space.generators)
    a = lo
    while a <= hi:
        c = counts.get(a, 0)
        marks.append("." if c == 0 else ("*" if c == 1 else str(min(c, 9))))
        labels.append(str(a))
        a += 1
    return "  A: " + " ".join(labels) + "\n     " + "   ".join(marks)


def _emit(report: dict, fmt: str, space: BigradedSpace = None,
          extra_text=()):
    if fmt == "json":
        print(json.dumps(report, indent=2, default=str))
    else:
        if space is not None:
            _print_table(space, report.get("command", ""))
        for line in extra_text:
            print(line)


def cmd_pair(args) -> int:
    a = _load_curve(args.a, args.strict)
    b = _load_curve(args.b, args.strict)
    total, _ = pairing.hf_multicurve(a, b)
    space = _normalized(total)
    report = dict(command="pair", inputs=[args.a, args.b],
                  generators=_generator_rows(space))
    _emit(report, args.format, space)
    return 0


def cmd_hfk(args) -> int:
    a = _load_curve(args.a, args.strict)
    b = _load_curve(args.b, args.strict)
    space = _normalized(pairing.hfk_of_gluing(a, b))
    verdict = lspace.staircase_check(space)
    report = dict(command="hfk", inputs=[args.a, args.b],
                  generators=_generator_rows(space),
                  verdict=dict(status=verdict.status, reason=verdict.reason,
                               steps=verdict.step_lengths))
    _emit(report, args.format, space,
          extra_text=[_gap_diagram(space),
                      f"  staircase: {verdict.status} ({verdict.reason})"])
    return 0


def cmd_lspace_check(args) -> int:
    a = _load_curve(args.a, args.strict)
    b = _load_curve(args.b, args.strict)
    from . import mcg

    g1 = mcg.mirror_multicurve(a)
    matching = pairing._compose_knot_matching(a.matching, b.matching)
    space = _normalized(pairing.hfr(g1, b, matching))
    verdict = lspace.staircase_check(space)
    obstruction = lspace.lspace_obstruction(g1, b, matching)
    report = dict(command="lspace-check", inputs=[args.a, args.b],
                  generators=_generator_rows(space),
                  verdict=dict(status=verdict.status, reason=verdict.reason,
                               steps=verdict.step_lengths,
                               obstructed=obstruction.obstructed,
                               path=obstruction.path,
                               obstruction_reason=obstruction.reason))
    if args.certificate:
        report["certificate"] = obstruction.certificate
    lines = [f"  staircase: {verdict.status} ({verdict.reason})",
             f"  obstruction: {'yes' if obstruction.obstructed else 'no'}"
             f" [{obstruction.path}] {obstruction.reason}"]
    if args.certificate and obstruction.certificate:
        lines.append(f"  certificate: {obstruction.certificate}")
    _emit(report, args.format, space, extra_text=lines)
    return 0


def cmd_split_check(args) -> int:
    a = _load_curve(args.a, args.strict)
    split = lspace.split_detection(a)
    report = dict(command="split-check", inputs=[args.a],
                  verdict=dict(split=split))
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print("split" if split else "not split")
    return 0


def cmd_verify_lemmas(args) -> int:
    from .model import OrderedMatching, rational, special, strip_V

    matching = OrderedMatching((1, 2), (4, 3))
    failures = 0
    cases = []
    for alpha in range(1, args.alpha_max + 1):
        for beta in range(1, alpha + 1):
            cases.append(("special-special", alpha, beta))
    for alpha in range(1, args.alpha_max + 1):
        for n in range(-args.n_max, args.n_max + 1):
            cases.append(("special-rational", alpha, n))
    for key in sorted(cases):
        kind, alpha, second = key
        c1 = special(alpha, 0, 1, 4, 1)
        if kind == "special-special":
            c2 = special(second, 0, 1, 4, 1)
            expected = [pairing.pair_specials_closed_form(alpha, second,
                                                          delta_sign=s)
                        for s in (1, -1)]
        else:
            c2 = rational(1, second)
            expected = [pairing.pair_special_rational_closed_form(alpha,
                                                                  second)]
        got = strip_V(pairing.floer_homology(c1, c2, matching))
        ok = any(got.equals_up_to_shift(e) for e in expected)
        status = "pass" if ok else "FAIL"
        print(f"{status} {kind} alpha={alpha} "
              f"{'beta' if kind == 'special-special' else 'n'}={second} "
              f"dim={got.dimension}")
        if not ok:
            failures += 1
    print(f"{'all cases pass' if failures == 0 else f'{failures} failures'}")
    return 0 if failures == 0 else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tanglecurves",
        description="Knot Floer homology from immersed-curve tangle "
                    "invariants on the four-punctured sphere")
    parser.add_argument("--format", choices=("table", "json"),
                        default="table")
    parser.add_argument("--strict", action="store_true",
                        help="turn multicurve validation warnings into errors")
    parser.add_argument("--certificate", action="store_true",
                        help="include obstruction certificates in output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair", help="bigraded generator table of a pairing")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("hfk", help="knot Floer homology of glued tangles")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_hfk)

    p = sub.add_parser("lspace-check",
                       help="staircase verdict and obstruction certificate")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_lspace_check)

    p = sub.add_parser("split-check", help="split tangle detection")
    p.add_argument("a")
    p.set_defaults(func=cmd_split_check)

    p = sub.add_parser("verify-lemmas",
                       help="sweep closed forms against the engine")
    p.add_argument("--alpha-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=4)
    p.set_defaults(func=cmd_verify_lemmas)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, NotDivisibleError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except InternalAssertionError as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
