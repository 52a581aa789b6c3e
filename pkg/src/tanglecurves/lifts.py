"""Lifts of curves to the plane minus the integer lattice.

A lift is a periodic piecewise-linear path.  By construction every vertex of
a template lies on an integer grid line, so the portion of the path inside
any unit square is a single straight segment.  That keeps all downstream
computations (grading walks, wedge domains, bigon disks) exact.

Grid lines (x = k and y = k for integer k) together with the lattice points
form the preimage P of the parametrization of the four-punctured sphere; the
grading rules count turns of the curve against P:

    delta:  +1/2 per left turn, 0 straight, -1/2 per right turn;
    alex:   -e_j for every lattice corner j to the left of the step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .model import (
    AlexGrading,
    CurveComponent,
    InternalAssertionError,
    Slope,
    ValidationError,
    admissible_end_pairs,
    puncture_at,
)

F = Fraction
Pt = Tuple[Fraction, Fraction]
IVec = Tuple[int, int]


def _cross(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _sub(a, b) -> Pt:
    return (a[0] - b[0], a[1] - b[1])


def _add(a, b) -> Pt:
    return (a[0] + b[0], a[1] + b[1])


def _scale(a, k) -> Pt:
    return (a[0] * k, a[1] * k)


def segment_hits_lattice(a: Pt, b: Pt) -> bool:
    """Exact check whether the closed segment [a, b] meets Z^2."""
    d = _sub(b, a)
    if d[0] != 0:
        lo, hi = sorted((a[0], b[0]))
        k = math.ceil(lo)
        while k <= hi:
            t = (F(k) - a[0]) / d[0]
            y = a[1] + t * d[1]
            if y.denominator == 1:
                return True
            k += 1
        return False
    if a[0].denominator != 1:
        return False
    lo, hi = sorted((a[1], b[1]))
    return math.floor(hi) >= math.ceil(lo)


def segment_intersection(a1: Pt, a2: Pt, b1: Pt, b2: Pt):
    """Intersection (point, t, s) of segments with 0<=t,s<=1, or None.

    Parallel segments return None; collinear overlap is detected separately.
    """
    da, db = _sub(a2, a1), _sub(b2, b1)
    denom = _cross(da, db)
    if denom == 0:
        return None
    diff = _sub(b1, a1)
    t = _cross(diff, db) / denom
    s = _cross(diff, da) / denom
    if 0 <= t <= 1 and 0 <= s <= 1:
        return (_add(a1, _scale(da, t)), t, s)
    return None


def segments_overlap(a1: Pt, a2: Pt, b1: Pt, b2: Pt) -> bool:
    """True if two segments are collinear and share more than a point."""
    da, db = _sub(a2, a1), _sub(b2, b1)
    if _cross(da, db) != 0 or _cross(_sub(b1, a1), da) != 0:
        return False

    def proj(p):
        return (p[0] - a1[0]) * da[0] + (p[1] - a1[1]) * da[1]

    lo1, hi1 = sorted((proj(a1), proj(a2)))
    lo2, hi2 = sorted((proj(b1), proj(b2)))
    return max(lo1, lo2) < min(hi1, hi2)


# ---------------------------------------------------------------------------
# Crossings with the grid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    """Intersection of a lift with one grid line, with relative gradings."""

    point: Pt
    axis: str               # 'v' (line x = k) or 'h' (line y = k)
    line: int
    d_in: Pt                # direction of the arriving segment
    d_out: Pt               # direction of the departing segment
    seg_index: int          # departing segment index within the period
    t: Fraction             # parameter along that segment (0 <= t < 1)
    delta: Fraction = F(0)
    alex: AlexGrading = AlexGrading()

    def perp_out(self) -> Pt:
        """Normal of the crossed line signed along the departing direction."""
        if self.axis == 'v':
            return (F(1 if self.d_out[0] > 0 else -1), F(0))
        return (F(0), F(1 if self.d_out[1] > 0 else -1))


def _square_corners(entry_pt: Pt, exit_pt: Pt):
    mid = _scale(_add(entry_pt, exit_pt), F(1, 2))
    sx, sy = math.floor(mid[0]), math.floor(mid[1])
    return [(sx, sy), (sx + 1, sy), (sx, sy + 1), (sx + 1, sy + 1)]


def step_increment(entry_pt: Pt, entry_axis: str, exit_pt: Pt, exit_axis: str,
                   seg_dir: Pt):
    """(delta_inc, alex_inc) for one square traversal along seg_dir."""
    left = []
    for c in _square_corners(entry_pt, exit_pt):
        cr = _cross(seg_dir, _sub((F(c[0]), F(c[1])), entry_pt))
        if cr == 0:
            raise InternalAssertionError("lattice corner on a curve segment")
        if cr > 0:
            left.append(c)
    if entry_axis == exit_axis:
        turn = 0
        if len(left) != 2:
            raise InternalAssertionError("straight step must see 2 left corners")
    else:
        if entry_axis == 'v':
            n_in = (F(1 if seg_dir[0] > 0 else -1), F(0))
            n_out = (F(0), F(1 if seg_dir[1] > 0 else -1))
        else:
            n_in = (F(0), F(1 if seg_dir[1] > 0 else -1))
            n_out = (F(1 if seg_dir[0] > 0 else -1), F(0))
        turn = 1 if _cross(n_in, n_out) > 0 else -1
        if len(left) != (1 if turn == 1 else 3):
            raise InternalAssertionError(
                f"turn {turn} saw {len(left)} left corners")
    alex_inc = AlexGrading()
    for (cx, cy) in left:
        alex_inc = alex_inc - AlexGrading.unit(puncture_at(cx, cy))
    return F(turn, 2), alex_inc


# ---------------------------------------------------------------------------
# Lifts
# ---------------------------------------------------------------------------


class Lift:
    """A periodic PL lift; vertices lie on grid lines.

    verts: vertices of one period; the path runs verts[0] -> ... -> verts[-1]
    -> verts[0] + period.  The translation by period generates the downstairs
    traversal (deck period).
    """

    def __init__(self, verts: Sequence[Pt], period: IVec, label: str = ""):
        self.verts: List[Pt] = [(F(v[0]), F(v[1])) for v in verts]
        self.period: IVec = (int(period[0]), int(period[1]))
        self.label = label
        self.segments: List[Tuple[Pt, Pt]] = []
        for i, a in enumerate(self.verts):
            b = self.verts[i + 1] if i + 1 < len(self.verts) else \
                _add(self.verts[0], self.period)
            if a == b:
                raise ValidationError("degenerate lift segment")
            if segment_hits_lattice(a, b):
                raise ValidationError(
                    f"lift segment {a}->{b} passes through a lattice point")
            self.segments.append((a, b))
        self.crossings: List[Crossing] = self._walk()

    # -- crossings -----------------------------------------------------------

    def _seg_dir(self, i: int) -> Pt:
        a, b = self.segments[i % len(self.segments)]
        return _sub(b, a)

    def _raw_crossings(self) -> List[Crossing]:
        out = []
        nseg = len(self.segments)
        for idx, (a, b) in enumerate(self.segments):
            d = _sub(b, a)
            local = []
            if d[0] != 0:
                lo, hi = sorted((a[0], b[0]))
                for k in range(math.ceil(lo), math.floor(hi) + 1):
                    t = (F(k) - a[0]) / d[0]
                    if 0 <= t < 1:
                        local.append((t, 'v', k))
            if d[1] != 0:
                lo, hi = sorted((a[1], b[1]))
                for k in range(math.ceil(lo), math.floor(hi) + 1):
                    t = (F(k) - a[1]) / d[1]
                    if 0 <= t < 1:
                        local.append((t, 'h', k))
            local.sort()
            for j in range(1, len(local)):
                if local[j][0] == local[j - 1][0]:
                    raise InternalAssertionError(
                        "lift crosses two grid lines at one point")
            for t, axis, k in local:
                pt = _add(a, _scale(d, t))
                d_in = d if t > 0 else self._seg_dir(idx - 1)
                out.append(Crossing(pt, axis, k, d_in, d, idx, t))
        if not out:
            raise InternalAssertionError("lift must cross the grid")
        return out

    def _walk(self) -> List[Crossing]:
        raw = self._raw_crossings()
        graded = [raw[0]]
        delta, alex = F(0), AlexGrading()
        for prev, cur in zip(raw, raw[1:]):
            dl, av = step_increment(prev.point, prev.axis, cur.point, cur.axis,
                                    prev.d_out)
            delta += dl
            alex = alex + av
            graded.append(Crossing(cur.point, cur.axis, cur.line, cur.d_in,
                                   cur.d_out, cur.seg_index, cur.t, delta, alex))
        # closing step back to the first crossing of the next period
        last, first = raw[-1], raw[0]
        first_pt = _add(first.point, self.period)
        dl, av = step_increment(last.point, last.axis, first_pt, first.axis,
                                last.d_out)
        net_delta = (graded[-1].delta - graded[0].delta) + dl
        if net_delta != 0:
            raise InternalAssertionError(
                f"lift {self.label}: delta does not close up ({net_delta})")
        self.net_alex: AlexGrading = (graded[-1].alex - graded[0].alex) + av
        return graded


# ---------------------------------------------------------------------------
# Templates
# ---------------------------------------------------------------------------


def _grid_crossings_of_line(slope: Slope, offset: Fraction,
                            t_center: Fraction, span: int):
    """Grid crossings of the line {p x - q y = offset}.

    Points are base + t*u with u = (q, p); returns sorted (t, point, axis)
    for |t - t_center| <= span.
    """
    p, q = slope.p, slope.q
    if q == 0:
        base: Pt = (F(offset, p), F(0))
    else:
        base = (F(0), F(-offset, q))
    u = (F(q), F(p))
    out = []
    if q != 0:
        xs = [base[0] + (t_center - span) * q, base[0] + (t_center + span) * q]
        for k in range(math.floor(min(xs)), math.ceil(max(xs)) + 1):
            t = (F(k) - base[0]) / q
            if abs(t - t_center) <= span:
                out.append((t, _add(base, _scale(u, t)), 'v'))
    if p != 0:
        ys = [base[1] + (t_center - span) * p, base[1] + (t_center + span) * p]
        for k in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
            t = (F(k) - base[1]) / p
            if abs(t - t_center) <= span:
                out.append((t, _add(base, _scale(u, t)), 'h'))
    out.sort(key=lambda item: item[0])
    dedup = []
    for item in out:
        if not dedup or dedup[-1][0] != item[0]:
            dedup.append(item)
    return dedup


def line_lift(slope: Slope, offset: Fraction, label: str = "") -> Lift:
    """Straight line {p x - q y = offset}; downstairs period is 2u."""
    offset = F(offset)
    if offset.denominator == 1:
        raise ValidationError("line offset must keep the line off the lattice")
    pts = _grid_crossings_of_line(slope, offset, F(0), 3)
    if not pts:
        raise InternalAssertionError("line lift found no grid crossings")
    start = pts[0][1]
    return Lift([start], (2 * slope.q, 2 * slope.p), label=label)


@dataclass(frozen=True)
class SpecialStyle:
    """Lane offsets (in units of the functional p x - q y) for a zigzag.

    The four positive offsets are the distances from the axis of the four
    plunge junctions (before the down-plunge, after it, before the
    up-plunge, after it).  Distinct values tilt the two lanes slightly, so
    deck translates of the curve never overlap collinearly, and move the
    axis crossings of the plunges off the midpoints between punctures,
    keeping two curves along the same axis transverse.
    """

    s1: Fraction
    s2: Fraction
    s3: Fraction
    s4: Fraction

    @staticmethod
    def symmetric(h) -> "SpecialStyle":
        h = F(h)
        return SpecialStyle(h, h, h, h)

    @staticmethod
    def nested(h) -> "SpecialStyle":
        h = F(h)
        return SpecialStyle(h, h * F(5, 8), h * F(7, 8), h * F(3, 4))


def special_lift(slope: Slope, length: int, ends: frozenset,
                 style: SpecialStyle, label: str = "") -> Lift:
    """Zigzag lift of a special curve: wraps 2n punctures on one side of its
    axis, crosses, wraps 2n on the other side; period 4n * u.

    With f the axis functional, the path runs on the levels
    +s1 -> (plunge) -> -s2 -> (lane) -> -s3 -> (plunge) -> +s4 -> (lane).
    """
    n = length
    if n < 1:
        raise ValidationError("special length must be positive")
    if ends not in admissible_end_pairs(slope):
        raise ValidationError(f"ends {set(ends)} inadmissible for slope {slope}")
    offs = (F(style.s1), F(style.s2), F(style.s3), F(style.s4))
    if any(not (0 < s < 1) for s in offs):
        raise ValidationError("lane offsets must lie in (0, 1)")
    p, q = slope.p, slope.q

    base = None
    for bx in (0, 1):
        for by in (0, 1):
            lbl0 = puncture_at(bx, by)
            lbl1 = puncture_at(bx + q, by + p)
            if lbl0 != lbl1 and lbl0 in ends and lbl1 in ends:
                base = (F(bx), F(by))
                break
        if base is not None:
            break
    if base is None:
        raise InternalAssertionError("no axis base point found for ends")
    f0 = p * base[0] - q * base[1]

    norm2 = F(p * p + q * q)

    def t_proj(pt: Pt) -> Fraction:
        """u-coordinate of a point relative to the axis base."""
        return ((pt[0] - base[0]) * q + (pt[1] - base[1]) * p) / norm2

    def lane_vertex(h: Fraction, t_mid: Fraction, before: bool) -> Pt:
        if q == 0:
            lane_base: Pt = (F(f0 + h, p), F(0))
        else:
            lane_base = (F(0), F(-(f0 + h), q))
        shift = t_proj(lane_base)
        pts = _grid_crossings_of_line(slope, f0 + h, t_mid - shift, 3)
        graded = [(s + shift, pt) for s, pt, _axis in pts]
        if before:
            cands = [item for item in graded if item[0] < t_mid]
            if not cands:
                raise InternalAssertionError("no lane vertex before midpoint")
            return cands[-1][1]
        cands = [item for item in graded if item[0] > t_mid]
        if not cands:
            raise InternalAssertionError("no lane vertex after midpoint")
        return cands[0][1]

    # Midpoints between consecutive punctures on the axis sit at u-coordinate
    # t = k + 1/2 relative to the base point.
    t_down = F(1, 2)
    t_up = F(4 * n + 1, 2)
    s1, s2, s3, s4 = offs
    v1 = lane_vertex(s1, t_down, before=True)
    v2 = lane_vertex(-s2, t_down, before=False)
    v3 = lane_vertex(-s3, t_up, before=True)
    v4 = lane_vertex(s4, t_up, before=False)
    return Lift([v1, v2, v3, v4], (4 * n * q, 4 * n * p), label=label)


# ---------------------------------------------------------------------------
# Parameter families for pairing positions
# ---------------------------------------------------------------------------

_PRIMARY_OFFSETS = (F(1, 2), F(3, 8), F(5, 8), F(7, 16), F(9, 16), F(11, 32))
_SECONDARY_OFFSETS = (F(1, 4), F(3, 4), F(5, 16), F(11, 16), F(7, 32), F(13, 32))


_PRIMARY_RATIOS = (
    (F(1), F(1), F(1), F(1)),
    (F(1), F(13, 16), F(15, 16), F(7, 8)),
    (F(1), F(27, 32), F(29, 32), F(25, 32)),
    (F(1), F(7, 8), F(31, 32), F(27, 32)),
    (F(15, 16), F(13, 16), F(1), F(7, 8)),
    (F(1), F(21, 32), F(31, 32), F(23, 32)),
)
_SECONDARY_RATIOS = (
    (F(1), F(5, 8), F(7, 8), F(3, 4)),
    (F(1), F(9, 16), F(13, 16), F(11, 16)),
    (F(1), F(11, 16), F(15, 16), F(13, 16)),
    (F(15, 16), F(5, 8), F(7, 8), F(21, 32)),
    (F(1), F(19, 32), F(27, 32), F(23, 32)),
    (F(29, 32), F(5, 8), F(13, 16), F(3, 4)),
)


def component_lift(c: CurveComponent, primary: bool, variant: int = 0,
                   shrink: int = 0) -> Lift:
    """Template for a component; primary/secondary choose disjoint parameter
    families so paired curves sit in general position.  shrink halves all
    offsets (used to restore slope domination against shallow partners);
    variant perturbs the lane ratios to escape degenerate incidences.

    For length >= 2 the primary lanes are tilted too, so the curve's own
    2Z^2-translates stay transverse to each other.
    """
    scale = F(1, 1 << shrink)
    if c.is_rational:
        offs = _PRIMARY_OFFSETS if primary else _SECONDARY_OFFSETS
        return line_lift(c.slope, offs[variant % len(offs)] * scale,
                         label=c.name())
    if primary:
        h = F(1, 4) * scale
        ratios = _PRIMARY_RATIOS[variant % len(_PRIMARY_RATIOS)]
        if c.length == 1 and variant == 0:
            style = SpecialStyle.symmetric(h)
        else:
            r = ratios if ratios != _PRIMARY_RATIOS[0] else _PRIMARY_RATIOS[1]
            style = SpecialStyle(*(h * x for x in r))
    else:
        h = F(1, 8) * scale
        r = _SECONDARY_RATIOS[variant % len(_SECONDARY_RATIOS)]
        style = SpecialStyle(*(h * x for x in r))
    return special_lift(c.slope, c.length, c.ends, style, label=c.name())
