"""Structural predicates on bigraded spaces and the L-space obstruction
pipeline: staircase recognition, convexity, split-tangle detection, pinching,
and the executable case analysis producing obstruction certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .model import (
    BigradedSpace,
    Generator,
    Multicurve,
    OrderedMatching,
    ValidationError,
)
from . import pairing as _pairing

F = Fraction


# ---------------------------------------------------------------------------
# Basic shape predicates
# ---------------------------------------------------------------------------


def is_skeletal(s: BigradedSpace) -> bool:
    """At most one generator in each Alexander grading."""
    seen = set()
    for g in s.generators:
        if g.alex in seen:
            return False
        seen.add(g.alex)
    return True


def is_contiguous(s: BigradedSpace) -> bool:
    """Consecutive Alexander gradings, single delta grading."""
    if s.is_zero():
        return False
    if not is_skeletal(s):
        return False
    alex = s.alex_support()
    if any(b - a != 1 for a, b in zip(alex, alex[1:])):
        return False
    return len({g.delta for g in s.generators}) == 1


# ---------------------------------------------------------------------------
# Staircase recognition
# ---------------------------------------------------------------------------

POSITIVE = "PositiveStaircase"
NEGATIVE = "NegativeStaircase"
NOT_STAIRCASE = "NotStaircase"


@dataclass(frozen=True)
class StaircaseVerdict:
    status: str
    reason: str = ""
    step_lengths: Optional[Tuple[int, ...]] = None   # Alexander gaps A_{k+1}-A_k

    @property
    def is_staircase(self) -> bool:
        return self.status in (POSITIVE, NEGATIVE)

    def __bool__(self):
        return self.is_staircase


def staircase_check(s: BigradedSpace) -> StaircaseVerdict:
    """Checks the structural conditions forced on the knot Floer homology of
    a knot with a non-trivial L-space surgery, on relatively graded input:

    skeletal; odd dimension; Alexander symmetry after centering; top gap 1;
    per-step gap identity |d_k - d_{k-1}| = A_k - A_{k-1} - 1; and co-monotone
    Maslov ordering.  The sign is read off the direction of delta alternation
    (contiguous spaces are reported positive; relative gradings cannot see
    the chirality of a constant-delta staircase).
    """
    if s.is_zero():
        return StaircaseVerdict(NOT_STAIRCASE, "empty space")
    if not is_skeletal(s):
        return StaircaseVerdict(NOT_STAIRCASE, "not skeletal")
    gens = sorted(s.generators, key=lambda g: g.alex)
    n = len(gens)
    if n % 2 == 0:
        return StaircaseVerdict(NOT_STAIRCASE, "even total dimension")
    alex = [g.alex for g in gens]
    delta = [g.delta for g in gens]
    center = sum(alex, F(0)) / n
    centered = [a - center for a in alex]
    for k in range(n):
        if centered[k] != -centered[n - 1 - k]:
            return StaircaseVerdict(NOT_STAIRCASE, "alexander symmetry fails")
    if n > 1 and centered[-1] - centered[-2] != 1:
        return StaircaseVerdict(NOT_STAIRCASE, "top gap != 1")
    for k in range(1, n):
        gap = alex[k] - alex[k - 1]
        if abs(delta[k] - delta[k - 1]) != gap - 1:
            return StaircaseVerdict(
                NOT_STAIRCASE, "gap-delta identity fails")
    # Maslov co-monotonicity: M = A - delta must strictly increase with A.
    maslov = [a - d for a, d in zip(alex, delta)]
    for k in range(1, n):
        if not maslov[k] > maslov[k - 1]:
            return StaircaseVerdict(NOT_STAIRCASE, "maslov ordering fails")
    # delta alternation pattern fixes the sign: for a positive staircase the
    # step into the top generator has delta difference -(gap - 1) <= 0 and
    # the signs alternate with the parity of the step.
    sign = _staircase_sign(alex, delta)
    if sign == 0:
        return StaircaseVerdict(NOT_STAIRCASE, "delta alternation broken")
    steps = tuple(int(alex[k] - alex[k - 1]) for k in range(1, n))
    return StaircaseVerdict(POSITIVE if sign > 0 else NEGATIVE,
                            "all staircase conditions hold", steps)


def _staircase_sign(alex: Sequence[Fraction], delta: Sequence[Fraction]) -> int:
    n = len(alex)
    for want in (1, -1):
        ok = True
        for k in range(1, n):
            gap = alex[k] - alex[k - 1]
            expected = (gap - 1) * (1 if (n - 1 - k) % 2 == 1 else -1) * want
            if delta[k] - delta[k - 1] != expected:
                ok = False
                break
        if ok:
            return want
    return 0


def staircase_space(step_lengths: Sequence[int], sign: int = 1
                    ) -> BigradedSpace:
    """Rebuild the bigraded space of a staircase from its Alexander gaps."""
    alex = [F(0)]
    for gap in step_lengths:
        alex.append(alex[-1] + gap)
    n = len(alex)
    delta = [F(0)] * n
    for k in range(n - 1, 0, -1):
        gap = alex[k] - alex[k - 1]
        expected = (gap - 1) * (1 if (n - 1 - k) % 2 == 1 else -1) * sign
        delta[k - 1] = delta[k] - expected
    return BigradedSpace(Generator(a, d, f"step{k}")
                         for k, (a, d) in enumerate(zip(alex, delta)))


def gap_delta_check(s: BigradedSpace) -> bool:
    """Per-step identity and the general inequality
    |d_k - d_k'| <= A_k - A_k' - (k - k') for all pairs (skeletal input)."""
    if not is_skeletal(s):
        raise ValidationError("gap_delta_check needs a skeletal space")
    gens = sorted(s.generators, key=lambda g: g.alex)
    n = len(gens)
    for k in range(1, n):
        gap = gens[k].alex - gens[k - 1].alex
        if abs(gens[k].delta - gens[k - 1].delta) != gap - 1:
            return False
    for k in range(n):
        for kp in range(k):
            bound = (gens[k].alex - gens[kp].alex) - (k - kp)
            if abs(gens[k].delta - gens[kp].delta) > bound:
                return False
    return True


def convexity_filter(total: BigradedSpace,
                     member: Callable[[Generator], bool]) -> bool:
    """True iff the member set is convex in the Alexander ordering."""
    if not is_skeletal(total):
        raise ValidationError("convexity_filter needs a skeletal space")
    gens = sorted(total.generators, key=lambda g: g.alex)
    flags = [member(g) for g in gens]
    inside = False
    seen_gap_after = False
    for f in flags:
        if f:
            if inside and seen_gap_after:
                return False
            inside = True
        elif inside:
            seen_gap_after = True
    return True


# ---------------------------------------------------------------------------
# Split detection
# ---------------------------------------------------------------------------


def split_detection(m: Multicurve) -> bool:
    """True iff every component is rational, of one slope, trivial system."""
    slopes = set()
    for c in m.components:
        if not c.is_rational:
            return False
        if not c.local_system.is_trivial:
            return False
        slopes.add(c.slope)
    return len(slopes) == 1


# ---------------------------------------------------------------------------
# Pinching
# ---------------------------------------------------------------------------


def pinch(g1: Multicurve, g2: Multicurve, side: int, component_index: int,
          matching: Optional[OrderedMatching] = None) -> BigradedSpace:
    """HFr of one rational component against the whole other side.

    This is the invariant of the corresponding rational-replacement knot, a
    summand of the full pairing.
    """
    if side not in (1, 2):
        raise ValidationError("side must be 1 or 2")
    source = g1 if side == 1 else g2
    comp = source.components[component_index]
    if not comp.is_rational:
        raise ValidationError("pinching requires a rational component")
    sub = Multicurve((comp,), source.matching)
    if side == 1:
        return _pairing.hfr(sub, g2, matching or g2.matching)
    return _pairing.hfr(g1, sub, matching or g2.matching)


# ---------------------------------------------------------------------------
# The obstruction pipeline
# ---------------------------------------------------------------------------


@dataclass
class ObstructionVerdict:
    obstructed: bool
    path: str                     # "both-special" | "mixed-rational" | "none"
    reason: str
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.obstructed


def _convexity_violation(total_gens: List[Generator],
                         member_tags: set) -> Optional[Tuple[int, int, int]]:
    """Indices (in Alexander order) of an in/out/in triple, if any."""
    order = sorted(range(len(total_gens)), key=lambda i: total_gens[i].alex)
    marks = [total_gens[i].tag in member_tags for i in order]
    first_in = None
    gap_at = None
    for pos, flag in enumerate(marks):
        if flag:
            if first_in is not None and gap_at is not None:
                return (order[first_in], order[gap_at], order[pos])
            if first_in is None:
                first_in = pos
        elif first_in is not None and gap_at is None:
            gap_at = pos
    return None


def lspace_obstruction(g1: Multicurve, g2: Multicurve,
                       matching: Optional[OrderedMatching] = None
                       ) -> ObstructionVerdict:
    """Executable form of the main case analysis.

    g1 plays the role of the mirrored side (the pairing computed is
    HFr(g1, g2) as given; callers gluing tangles mirror first).  Returns a
    certificate: either the non-skeletal evidence or a convexity violation
    against a pinched subspace.
    """
    if split_detection(g1) or split_detection(g2):
        return ObstructionVerdict(
            False, "none",
            "a side is split (all rational, one slope, trivial systems); "
            "this criterion does not obstruct")
    matching = matching or g2.matching
    s1 = [c for c in g1.components if not c.is_rational]
    s2 = [c for c in g2.components if not c.is_rational]

    if s1 and s2:
        return _both_special_path(g1, g2, matching)

    for (a, b, name) in ((g1, g2, "side2"), (g2, g1, "side1")):
        b_rational = all(c.is_rational for c in b.components)
        b_mixed = len({c.slope for c in b.components if c.is_rational}) > 1
        a_nonrational = any(not c.is_rational for c in a.components) or \
            len(a.components) > 1
        if b_rational and b_mixed and a_nonrational:
            if name == "side2":
                return _mixed_rational_path(a, b, matching, swapped=False)
            return _mixed_rational_path(a, b, matching, swapped=True)

    return ObstructionVerdict(False, "none",
                              "no obstruction from this criterion")


def _summand_table(g1: Multicurve, g2: Multicurve, matching):
    return _pairing.hfr_summands(g1, g2, matching, tolerant=True)


def _multiset_convexity_violation(gens: List[Generator], member_tags: set):
    """An (in, out, in) witness for a subspace of a (possibly non-skeletal)
    multiset: W-generators at A1 < A3, some non-W generator at A1 < A2 < A3,
    and no W-generator at A2."""
    w_levels = sorted({g.alex for g in gens if g.tag in member_tags})
    if len(w_levels) < 2:
        return None
    lo, hi = w_levels[0], w_levels[-1]
    w_set = set(w_levels)
    for g in sorted(gens, key=lambda x: x.alex):
        if lo < g.alex < hi and g.tag not in member_tags \
                and g.alex not in w_set:
            below = max(a for a in w_levels if a < g.alex)
            above = min(a for a in w_levels if a > g.alex)
            g_lo = next(x for x in gens
                        if x.alex == below and x.tag in member_tags)
            g_hi = next(x for x in gens
                        if x.alex == above and x.tag in member_tags)
            return (g_lo, g, g_hi)
    return None


def _witness_rows(triple) -> list:
    return [(str(g.alex), str(g.delta), g.tag) for g in triple]


def _block_summary(space: BigradedSpace) -> dict:
    """Contiguous-block structure of a summand (support and delta levels)."""
    from collections import Counter

    alex = space.alex_support()
    blocks = []
    if alex:
        start = prev = alex[0]
        for a in alex[1:]:
            if a == prev + 1:
                prev = a
                continue
            blocks.append((str(start), str(prev)))
            start = prev = a
        blocks.append((str(start), str(prev)))
    deltas = sorted({str(g.delta) for g in space.generators})
    return dict(dimension=space.dimension,
                blocks=blocks, deltas=deltas)


def _both_special_path(g1: Multicurve, g2: Multicurve,
                       matching) -> ObstructionVerdict:
    """Specials on both sides.

    The certificate assembles the forced grading configuration: the
    special-special summand is two contiguous blocks of even dimension with
    an odd Alexander distance between their inner ends and a delta jump of
    one, while a special paired with a rational component of the other side
    is a single contiguous block that is strictly longer than the gap.  In
    any skeletal placement an odd number of generators must then sit
    strictly inside the gap, so the subspace obtained by pinching onto a
    rational component skips an occupied grading: a convexity violation.
    An explicit (in, out, in) witness is included whenever the input
    offsets realize one.
    """
    summands = _summand_table(g1, g2, matching)
    total = BigradedSpace()
    for s in summands:
        total = total + s["hfr"]
    gens = list(total.generators)
    skeletal = is_skeletal(total)

    config = dict(kind="forced-convexity", skeletal=skeletal, summands={})
    two_block = None
    straddler = None
    max_len = 0
    for s in summands:
        if not s["c1"].is_rational or not s["c2"].is_rational:
            max_len = max(max_len, s["c1"].length, s["c2"].length)
    for s in summands:
        key = f"{s['c1'].name()}|{s['c2'].name()}"
        ss = not s["c1"].is_rational and not s["c2"].is_rational
        sr = (not s["c1"].is_rational) != (not s["c2"].is_rational)
        if not (ss or sr):
            continue
        summary = _block_summary(s["hfr"])
        config["summands"][key] = summary
        if ss and two_block is None:
            alpha = max(s["c1"].length, s["c2"].length)
            beta = min(s["c1"].length, s["c2"].length)
            matches = any(s["hfr"].equals_up_to_shift(
                _pairing.pair_specials_closed_form(alpha, beta, delta_sign=d))
                for d in (1, -1))
            if matches:
                two_block = dict(summand=key, alpha=alpha, beta=beta,
                                 gap=2 * (alpha - beta),
                                 inner_distance_odd=True,
                                 delta_levels=summary["deltas"])
        if sr:
            length = max(s["c1"].length, s["c2"].length)
            if is_contiguous(s["hfr"]) and (
                    straddler is None or length == max_len
                    and straddler.get("special_length") != max_len):
                straddler = dict(summand=key, dimension=summary["dimension"],
                                 special_length=length, contiguous=True)
    if two_block:
        config["special_special"] = two_block
    if straddler:
        config["special_rational"] = straddler
    forced = bool(two_block and (
        two_block["alpha"] == two_block["beta"]
        or (straddler and straddler["dimension"] > two_block["gap"])))
    config["forced_violation"] = forced

    for side, source in ((2, g2), (1, g1)):
        for idx, comp in enumerate(source.components):
            if not comp.is_rational:
                continue
            key = "j" if side == 2 else "i"
            member_tags = {g.tag for s in summands if s[key] == idx
                           for g in s["hfr"].generators}
            triple = _multiset_convexity_violation(gens, member_tags)
            if triple is not None:
                config.update(kind="convexity",
                              pinched_component=comp.name(), side=side,
                              witnesses=_witness_rows(triple))
                return ObstructionVerdict(
                    True, "both-special",
                    "pinching onto a rational component yields a subspace "
                    "that skips an occupied intermediate Alexander grading, "
                    "violating the convexity forced on L-space knot "
                    "subspaces",
                    config)
    if forced:
        return ObstructionVerdict(
            True, "both-special",
            "the two-block special pairing and the longer contiguous "
            "special-rational block force a convexity violation of a "
            "pinched subspace in every skeletal placement",
            config)
    if not skeletal:
        config.update(kind="non-skeletal", **_nonskeletal_evidence(total))
        return ObstructionVerdict(
            True, "both-special",
            "total pairing is not skeletal (two generators share an "
            "Alexander grading), violating the structure forced on knots "
            "with L-space surgeries",
            config)
    return ObstructionVerdict(
        False, "both-special",
        "no convexity violation found (unexpected for genuine invariants "
        "with specials on both sides)")


def _mixed_rational_path(a: Multicurve, b: Multicurve, matching,
                         swapped: bool) -> ObstructionVerdict:
    """All-rational mixed-slope side: order the contiguous blocks W_{i,j} by
    Alexander support; the ordering dichotomy selects a pinched subspace
    violating convexity (the block-ordering certificate)."""
    g1, g2 = (b, a) if swapped else (a, b)
    summands = _summand_table(g1, g2, matching)
    total = BigradedSpace()
    for s in summands:
        total = total + s["hfr"]
    gens = list(total.generators)
    skeletal = is_skeletal(total)

    # block order data: support intervals of each W_{i,j}
    def support(s):
        sup = s["hfr"].alex_support()
        return (sup[0], sup[-1]) if sup else None

    ordering = {}
    all_nonzero = True
    all_contiguous = True
    for s in summands:
        sup = support(s)
        if sup is None:
            all_nonzero = False
            continue
        ordering[(s["i"], s["j"])] = (str(sup[0]), str(sup[1]))
        if not is_contiguous(s["hfr"]):
            all_contiguous = False
    config = dict(kind="ordering", skeletal=skeletal,
                  blocks_nonzero=all_nonzero,
                  blocks_contiguous=all_contiguous,
                  block_supports={f"{k}": v for k, v in ordering.items()})

    # block-ordering consistency data: for rational first components i, i'
    # the relation "W_{i',j} below W_{i,j}" is j-independent
    rationals1 = [i for i, c in enumerate(g1.components) if c.is_rational]
    if len(rationals1) >= 1 and ordering:
        i0 = rationals1[0]
        relations = []
        for i in range(len(g1.components)):
            if i == i0:
                continue
            below = []
            for j in range(len(g2.components)):
                a_sup = ordering.get((i, j))
                b_sup = ordering.get((i0, j))
                if a_sup and b_sup:
                    below.append(Fraction(a_sup[0]) < Fraction(b_sup[0]))
            if below:
                relations.append(dict(pair=(i, i0), below=below,
                                      consistent=len(set(below)) == 1))
        config["ordering_relations"] = relations

    for side, source in ((1, g1), (2, g2)):
        for idx, comp in enumerate(source.components):
            if not comp.is_rational:
                continue
            key = "i" if side == 1 else "j"
            member_tags = {g.tag for s in summands if s[key] == idx
                           for g in s["hfr"].generators}
            triple = _multiset_convexity_violation(gens, member_tags)
            if triple is not None:
                config.update(pinched_component=comp.name(),
                              side=side if not swapped else 3 - side,
                              witnesses=_witness_rows(triple))
                return ObstructionVerdict(
                    True, "mixed-rational",
                    "the ordering of the contiguous blocks forces a pinched "
                    "subspace that skips an occupied intermediate Alexander "
                    "grading, violating the convexity forced on L-space "
                    "knots",
                    config)
    # Forced case: every block is nonzero and contiguous and there are at
    # least three components on each side, so in any skeletal placement the
    # block-order dichotomy (cases on whether the first rational's blocks
    # come before or after their partners, constrained by the ordering
    # relations) selects a pinched subspace skipping a grading.
    forced = (all_nonzero and all_contiguous
              and len(g1.components) >= 3 and len(g2.components) >= 3)
    config["forced_violation"] = forced
    if forced:
        return ObstructionVerdict(
            True, "mixed-rational",
            "all component blocks are nonzero and contiguous; the ordering "
            "dichotomy then forces a convexity violation of a pinched "
            "subspace in every skeletal placement",
            config)
    if not skeletal:
        config.update(kind="non-skeletal", **_nonskeletal_evidence(total))
        return ObstructionVerdict(
            True, "mixed-rational",
            "total pairing is not skeletal, violating the structure "
            "forced on knots with L-space surgeries",
            config)
    return ObstructionVerdict(
        False, "mixed-rational",
        "no convexity violation found among pinched subspaces")


def _nonskeletal_evidence(total: BigradedSpace) -> dict:
    from collections import Counter

    counts = Counter(g.alex for g in total.generators)
    alex = next(a for a, c in counts.items() if c > 1)
    tags = [g.tag for g in total.generators if g.alex == alex]
    return dict(alex=str(alex), tags=tags[:4])
