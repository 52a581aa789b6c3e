"""Pairing geometry: put two curve lifts in position, enumerate intersection
points, grade them, and certify minimality by bigon inspection.

Downstairs generators correspond to intersections of one fundamental window
of the first curve's lift with all deck images of the second curve's lift.
Deck transformations are translations by 2Z^2 and point reflections about
lattice points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .model import (
    AlexGrading,
    CurveComponent,
    InternalAssertionError,
    puncture_at,
)
from .lifts import (
    Crossing,
    Lift,
    Pt,
    component_lift,
    segment_intersection,
    segments_overlap,
    _add,
    _cross,
    _scale,
    _sub,
)

F = Fraction


class DegeneratePosition(Exception):
    """Templates landed in special position; caller retries with a variant."""


# ---------------------------------------------------------------------------
# Deck instances of a lift
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """g . template for g a deck transformation: x -> x + lam, or x -> lam - x."""

    template: Lift
    reflect: bool
    lam: Tuple[int, int]

    def map_point(self, p: Pt) -> Pt:
        if self.reflect:
            return (self.lam[0] - p[0], self.lam[1] - p[1])
        return (p[0] + self.lam[0], p[1] + self.lam[1])

    def inv_point(self, p: Pt) -> Pt:
        if self.reflect:
            return (self.lam[0] - p[0], self.lam[1] - p[1])
        return (p[0] - self.lam[0], p[1] - self.lam[1])

    def map_dir(self, d: Pt) -> Pt:
        return (-d[0], -d[1]) if self.reflect else d

    def key(self):
        """Canonical key: instances equal as sets share it (lam mod period)."""
        px, py = self.template.period
        lx, ly = self.lam
        # reduce lam modulo the period translation
        if px != 0:
            k = lx // px
        elif py != 0:
            k = ly // py
        else:  # pragma: no cover - periods are never zero
            k = 0
        return (self.reflect, lx - k * px, ly - k * py)


def _f_functional(lift: Lift):
    """Linear functional constant along the lift's period direction."""
    px, py = lift.period
    g = math.gcd(abs(px), abs(py))
    ux, uy = px // g, py // g

    def f(pt: Pt) -> Fraction:
        return uy * pt[0] - ux * pt[1]

    return f, (ux, uy)


def _bbox(points: Iterable[Pt]):
    xs, ys = zip(*points)
    return (min(xs), min(ys), max(xs), max(ys))


def enumerate_instances(window_pts: Sequence[Pt], template: Lift) -> List[Instance]:
    """All deck images of template whose band can meet the window's bbox."""
    f, (ux, uy) = _f_functional(template)
    t_vals = [f(v) for v in template.verts] + [f(_add(template.verts[0],
                                                      template.period))]
    t_lo, t_hi = min(t_vals), max(t_vals)
    w_vals = [f(p) for p in window_pts]
    w_lo, w_hi = min(w_vals) - 1, max(w_vals) + 1

    # translation lam shifts f by f(lam); reflection rho_lam maps the band
    # [t_lo, t_hi] to [f(lam) - t_hi, f(lam) - t_lo].
    instances: Dict[tuple, Instance] = {}

    def lam_candidates(shift_lo: Fraction, shift_hi: Fraction):
        """All lam in 2Z^2 with f(lam) in [shift_lo, shift_hi], up to period.

        f(2Z^2) = 2Z since (ux, uy) is primitive.  Solutions with a fixed
        f-value differ by multiples of 2u; modulo the template period
        m*(ux, uy) that leaves m/2 distinct translates.
        """
        out = []
        for s in range(math.ceil(shift_lo), math.floor(shift_hi) + 1):
            if s % 2 != 0:
                continue
            a, b = _solve_linear(uy, -ux, s // 2)
            lam0 = (2 * a, 2 * b)
            px, py = template.period
            m = px // ux if ux != 0 else py // uy
            for k in range(max(1, abs(m) // 2)):
                out.append((lam0[0] + 2 * k * ux, lam0[1] + 2 * k * uy))
        return out

    for lam in lam_candidates(w_lo - t_hi, w_hi - t_lo):
        inst = Instance(template, False, lam)
        instances.setdefault(inst.key(), inst)
    for lam in lam_candidates(w_lo + t_lo, w_hi + t_hi):
        inst = Instance(template, True, lam)
        instances.setdefault(inst.key(), inst)
    return list(instances.values())


def _solve_linear(a: int, b: int, c: int) -> Tuple[int, int]:
    """Some integer solution (x, y) of a x + b y = c (gcd(a, b) divides c)."""
    g, x0, y0 = _egcd(a, b)
    if c % g != 0:
        raise InternalAssertionError("no integer solution in lattice search")
    k = c // g
    return (x0 * k, y0 * k)


def _egcd(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


def instance_segments(inst: Instance, bbox) -> List[Tuple[Fraction, Pt, Pt]]:
    """(param_offset, a, b) for the instance's segments meeting the bbox.

    param_offset counts template periods: the template's segment j in period k
    has parameter base k*nseg + j.
    """
    min_x, min_y, max_x, max_y = bbox
    px, py = inst.template.period
    nseg = len(inst.template.segments)
    # find period range. project bbox corners through the inverse map onto the
    # period axis of the template.
    corners = [(min_x, min_y), (min_x, max_y), (max_x, min_y), (max_x, max_y)]
    t_template = []
    norm2 = px * px + py * py
    for cx, cy in corners:
        q = inst.inv_point((F(cx), F(cy)))
        t_template.append((q[0] * px + q[1] * py) / norm2)
    k_lo = math.floor(min(t_template)) - 1
    k_hi = math.ceil(max(t_template)) + 1
    out = []
    for k in range(k_lo, k_hi + 1):
        for j, (a, b) in enumerate(inst.template.segments):
            a2 = inst.map_point(_add(a, (px * k, py * k)))
            b2 = inst.map_point(_add(b, (px * k, py * k)))
            if max(a2[0], b2[0]) < min_x or min(a2[0], b2[0]) > max_x:
                continue
            if max(a2[1], b2[1]) < min_y or min(a2[1], b2[1]) > max_y:
                continue
            out.append((F(k * nseg + j), a2, b2))
    return out


# ---------------------------------------------------------------------------
# Crossing lookup along lifts and instances
# ---------------------------------------------------------------------------


def _crossing_params(lift: Lift) -> List[Fraction]:
    return [F(c.seg_index) + c.t for c in lift.crossings]


def prev_crossing(lift: Lift, param: Fraction) -> Tuple[Crossing, int]:
    """Last crossing with parameter strictly before param (period-extended).

    Returns (crossing, period_shift); gradings transport by period_shift *
    net_alex (delta has no net drift).
    """
    nseg = len(lift.segments)
    params = _crossing_params(lift)
    k = math.floor(param / nseg)
    base = param - k * nseg
    idx = None
    for i, p in enumerate(params):
        if p < base:
            idx = i
        else:
            break
    if idx is None:
        return lift.crossings[-1], k - 1
    return lift.crossings[idx], k


def crossing_grading(lift: Lift, crossing: Crossing, period_shift: int):
    alex = crossing.alex + lift.net_alex.scale(period_shift)
    return crossing.delta, alex


# ---------------------------------------------------------------------------
# Pair diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairGenerator:
    point: Pt
    w_param: Fraction
    inst_key: tuple
    i_param: Fraction
    d1: Pt
    d2: Pt
    alex: AlexGrading
    delta: Fraction          # relative within the diagram, snapped
    tag: str = ""


class PairDiagram:
    """All intersection data for one ordered pair of components."""

    def __init__(self, c1: CurveComponent, c2: CurveComponent,
                 lift1: Lift, lift2: Lift):
        self.c1, self.c2 = c1, c2
        self.lift1, self.lift2 = lift1, lift2
        self.nseg1 = len(lift1.segments)
        self.instances: Dict[tuple, Instance] = {}
        self.generators: List[PairGenerator] = []
        self._raw: List[dict] = []
        self._collect()
        self._grade()

    # -- intersection collection -------------------------------------------

    def _window_segments(self, periods=(0,)):
        out = []
        px, py = self.lift1.period
        for k in periods:
            for j, (a, b) in enumerate(self.lift1.segments):
                out.append((F(k * self.nseg1 + j),
                            _add(a, (px * k, py * k)), _add(b, (px * k, py * k))))
        return out

    def _collect(self):
        window = self._window_segments()
        pts = [p for _, a, b in window for p in (a, b)]
        for inst in enumerate_instances(pts, self.lift2):
            self.instances[inst.key()] = inst
        bbox = _bbox(pts)
        bbox = (bbox[0] - 1, bbox[1] - 1, bbox[2] + 1, bbox[3] + 1)
        seen_points = {}
        for inst in self.instances.values():
            for off2, a2, b2 in instance_segments(inst, bbox):
                for off1, a1, b1 in window:
                    if segments_overlap(a1, b1, a2, b2):
                        raise DegeneratePosition("collinear overlap")
                    hit = segment_intersection(a1, b1, a2, b2)
                    if hit is None:
                        continue
                    pt, t, s = hit
                    if t == 1 or s == 1:
                        continue  # counted at the 0-end of the next segment
                    if pt[0].denominator == 1 or pt[1].denominator == 1:
                        raise DegeneratePosition("generator on a grid line")
                    w_param = off1 + t
                    if not (0 <= w_param < self.nseg1):
                        continue
                    if pt in seen_points:
                        raise DegeneratePosition("coincident generators")
                    seen_points[pt] = True
                    self._raw.append(dict(
                        point=pt, w_param=w_param, inst=inst,
                        i_param=off2 + s,
                        d1=_sub(b1, a1), d2=_sub(b2, a2)))
        self._raw.sort(key=lambda r: r["w_param"])

    # -- gradings ------------------------------------------------------------

    def _grade(self):
        # The rotation formula lands exactly on half-integers: the arctan
        # parts of the two kappa-corrections and the crossing-angle term
        # cancel identically, leaving quarter-turn counts.  No per-diagram
        # re-basing: the values are comparable across the summands of a
        # multicurve pairing (per-component base choices are the only gauge).
        gens = []
        for i, r in enumerate(self._raw):
            alex = self._alex_of(r)
            diff = self._delta_raw(r) / math.pi
            k = round(diff * 2)
            if abs(diff * 2 - k) > 1e-7:
                raise InternalAssertionError(
                    f"delta value {diff} is not a half-integer")
            gens.append(PairGenerator(
                point=r["point"], w_param=r["w_param"],
                inst_key=r["inst"].key(), i_param=r["i_param"],
                d1=r["d1"], d2=r["d2"], alex=alex, delta=F(k, 2),
                tag=f"{self.c1.name()}|{self.c2.name()}#{i}"))
        self.generators = gens

    def _alex_of(self, r) -> AlexGrading:
        ident = Instance(self.lift1, False, (0, 0))
        return crossing_alex(ident, r["w_param"], r["inst"], r["i_param"],
                             r["point"])

    def _delta_raw(self, r) -> float:
        ident = Instance(self.lift1, False, (0, 0))
        return crossing_delta_raw(ident, r["w_param"], r["inst"],
                                  r["i_param"])

    # -- public views ---------------------------------------------------------

    def count(self) -> int:
        return len(self.generators)


def crossing_alex(inst1: Instance, p1: Fraction, inst2: Instance,
                  p2: Fraction, point: Pt) -> AlexGrading:
    """Alexander grading of the crossing of two lift instances at point.

    Evaluates the connecting-wedge recipe in the instances' own frames:
    the grading of the second curve's entry crossing minus the first's,
    plus the Alexander grading of the wedge domain closing up inside the
    unit square containing the point.
    """
    lift1, lift2 = inst1.template, inst2.template
    x_cross, k1 = prev_crossing(lift1, p1)
    _, alex1 = crossing_grading(lift1, x_cross, k1)
    x_pt = inst1.map_point(_add(x_cross.point, _scale(lift1.period, F(k1))))
    y_cross, k2 = prev_crossing(lift2, p2)
    _, alex2 = crossing_grading(lift2, y_cross, k2)
    y_pt = inst2.map_point(_add(y_cross.point, _scale(lift2.period, F(k2))))
    wedge = _wedge_alex(point, x_pt, y_pt)
    return alex2 - alex1 + wedge


def crossing_delta_raw(inst1: Instance, p1: Fraction, inst2: Instance,
                       p2: Fraction) -> float:
    """Rotation-formula delta of a crossing of two lift instances (exactly a
    half-integer multiple of pi; snapped by callers)."""
    lift1, lift2 = inst1.template, inst2.template
    x_cross, _ = prev_crossing(lift1, p1)
    y_cross, _ = prev_crossing(lift2, p2)
    d1_out = inst1.map_dir(x_cross.d_out)
    d2_out = inst2.map_dir(y_cross.d_out)
    k1 = _kappa(_perp_for(x_cross.axis, d1_out), d1_out)
    k2 = _kappa(_perp_for(y_cross.axis, d2_out), d2_out)
    # crossing-angle term: CCW angle from the second curve's tangent line to
    # the first curve's, in (0, pi); with the kappa corrections the arctan
    # parts cancel identically
    ang = _angle_mod_pi(d2_out, d1_out)
    return (float(x_cross.delta) * math.pi + k1) * -1 + \
           (float(y_cross.delta) * math.pi + k2) + ang


def _wedge_alex(gen_pt: Pt, x_pt: Pt, y_pt: Pt) -> AlexGrading:
    sx, sy = math.floor(gen_pt[0]), math.floor(gen_pt[1])
    # clockwise boundary cycle of the square starting at the SW corner:
    # SW -> NW -> NE -> SE (W edge up, N edge right, E edge down, S left)
    cw = [(F(sx), F(sy)), (F(sx), F(sy + 1)), (F(sx + 1), F(sy + 1)),
          (F(sx + 1), F(sy))]

    def boundary_param(p: Pt) -> Fraction:
        for i in range(4):
            a, b = cw[i], cw[(i + 1) % 4]
            d = _sub(b, a)
            w = _sub(p, a)
            if _cross(d, w) == 0:
                t = (w[0] * d[0] + w[1] * d[1]) / (d[0] ** 2 + d[1] ** 2)
                if 0 <= t <= 1:
                    return F(i) + t
        raise InternalAssertionError("entry point not on the square boundary")

    tx, ty = boundary_param(x_pt), boundary_param(y_pt)
    corners = _cw_corners(tx, ty, cw)
    polygon = [gen_pt, x_pt, *corners, y_pt]
    return _polygon_alex(polygon, sx, sy)


def _cw_corners(tx: Fraction, ty: Fraction, cw) -> List[Pt]:
    """Corners passed walking clockwise from parameter tx to ty."""
    if ty <= tx:
        ty += 4
    corners = []
    k = math.floor(tx) + 1
    while k <= ty:
        if k != ty:
            corners.append(cw[k % 4])
        k += 1
    return corners


def _polygon_alex(polygon: List[Pt], sx: int, sy: int) -> AlexGrading:
    eps = F(1, 4096)
    total = AlexGrading()
    for cx, cy in [(sx, sy), (sx + 1, sy), (sx, sy + 1), (sx + 1, sy + 1)]:
        s = 0
        for dx in (-eps, eps):
            for dy in (-eps, eps):
                s += _winding(polygon, (F(cx) + dx, F(cy) + dy))
        if s:
            total = total + AlexGrading.unit(puncture_at(cx, cy)).scale(-s)
    return total


def _perp_for(axis: str, d_out: Pt) -> Pt:
    if axis == 'v':
        return (F(1 if d_out[0] > 0 else -1), F(0))
    return (F(0), F(1 if d_out[1] > 0 else -1))


def _kappa(perp: Pt, d: Pt) -> float:
    """Signed angle from the crossing normal to the outgoing direction."""
    crossv = float(perp[0] * d[1] - perp[1] * d[0])
    dotv = float(perp[0] * d[0] + perp[1] * d[1])
    return math.atan2(crossv, dotv)


def _angle_mod_pi(d1: Pt, d2: Pt) -> float:
    a = math.atan2(float(d2[1]), float(d2[0])) - \
        math.atan2(float(d1[1]), float(d1[0]))
    while a <= 0:
        a += math.pi
    while a > math.pi:
        a -= math.pi
    return a


def _winding(polygon: Sequence[Pt], probe: Pt) -> int:
    """Winding number of the closed polygon around probe (CCW positive)."""
    wn = 0
    px, py = probe
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if a == b:
            continue
        ay, by = a[1], b[1]
        if ay <= py:
            if by > py:
                if _cross(_sub(b, a), _sub(probe, a)) > 0:
                    wn += 1
        else:
            if by <= py:
                if _cross(_sub(b, a), _sub(probe, a)) < 0:
                    wn -= 1
    return wn


def find_empty_bigons(diagram: PairDiagram) -> List[dict]:
    """Empty two-cornered disks between the window lift and deck images of
    the second curve (corners adjacent along both restricted to the pair).

    This is the minimality certificate: any such disk shows the downstairs
    curves are not in minimal position.  Only the window lift is needed on
    the first-curve side; a disk on another lift transports onto the window.
    """
    d = diagram
    window = d._window_segments(periods=(-1, 0, 1))
    pts = [p for _, a, b in window for p in (a, b)]
    box = _bbox(pts)
    bbox = (box[0] - 1, box[1] - 1, box[2] + 1, box[3] + 1)
    groups: Dict[tuple, List[dict]] = {}
    for inst in enumerate_instances(pts, d.lift2):
        for off2, a2, b2 in instance_segments(inst, bbox):
            for off1, a1, b1 in window:
                hit = segment_intersection(a1, b1, a2, b2)
                if hit is None:
                    continue
                pt, t, s = hit
                if t == 1 or s == 1:
                    continue
                groups.setdefault(inst.key(), []).append(
                    dict(w=off1 + t, p2=off2 + s, inst=inst, point=pt))
    out = []
    for key, recs in groups.items():
        recs.sort(key=lambda r: r["p2"])
        order_w = sorted(recs, key=lambda r: r["w"])
        pos_w = {id(r): i for i, r in enumerate(order_w)}
        inst = recs[0]["inst"]
        for r1, r2 in zip(recs, recs[1:]):
            if abs(pos_w[id(r1)] - pos_w[id(r2)]) != 1:
                continue
            lo_w, hi_w = sorted((r1["w"], r2["w"]))
            arc1 = _lift_arc(diagram.lift1, lo_w, hi_w)
            if r1["w"] > r2["w"]:
                arc1 = list(reversed(arc1))
            arc2 = [inst.map_point(p)
                    for p in _lift_arc(inst.template, r1["p2"], r2["p2"])]
            polygon = arc1[:-1] + list(reversed(arc2))[:-1]
            if not _lattice_content(polygon):
                out.append(dict(a=r1, b=r2, polygon=polygon))
    return out


# ---------------------------------------------------------------------------
# Local two-curve arrangements and bigons
# ---------------------------------------------------------------------------
#
# Empty bigons lift to honest two-cornered disks between one lift of each
# curve.  Once-punctured bigons do not: their boundary loop winds a puncture
# once, so the lift closes only after applying the point reflection about
# that puncture; they appear upstairs as once-punctured quadrilaterals
# symmetric under that reflection (four corners, two lifts of each curve).


def _point_at(lift: Lift, param: Fraction) -> Pt:
    nseg = len(lift.segments)
    k = math.floor(param / nseg)
    local = param - k * nseg
    j = math.floor(local)
    t = local - j
    a, b = lift.segments[j]
    p = _add(a, _scale(_sub(b, a), t))
    return _add(p, (lift.period[0] * k, lift.period[1] * k))


def _lift_arc(lift: Lift, p_lo: Fraction, p_hi: Fraction) -> List[Pt]:
    """Polyline along a lift between two parameters (p_lo < p_hi)."""
    nseg = len(lift.segments)
    pts = [_point_at(lift, p_lo)]
    k = math.floor(p_lo)
    while F(k + 1) < p_hi:
        j = (k + 1) % nseg
        shift = (k + 1 - j) // nseg
        v = lift.segments[j][0]
        pts.append(_add(v, (lift.period[0] * shift, lift.period[1] * shift)))
        k += 1
    pts.append(_point_at(lift, p_hi))
    return pts


def _compose_inverse(g1: Instance, reflect2: bool, lam2):
    """(reflect, lam) of g1^{-1} g2 acting on the second template."""
    r1, l1 = g1.reflect, g1.lam
    if not r1:
        return (reflect2, (lam2[0] - l1[0], lam2[1] - l1[1]))
    if not reflect2:
        return (True, (l1[0] - lam2[0], l1[1] - lam2[1]))
    return (False, (l1[0] - lam2[0], l1[1] - lam2[1]))


@dataclass(frozen=True)
class ArrCrossing:
    point: Pt
    inst1: Instance
    p1: Fraction            # parameter along inst1's template
    inst2: Instance
    p2: Fraction


class Arrangement:
    """All crossings of nearby lifts of curve 1 with nearby lifts of curve 2."""

    def __init__(self, diagram: PairDiagram, margin: int = 1):
        self.d = diagram
        window = diagram._window_segments(periods=(-1, 0, 1))
        pts = [p for _, a, b in window for p in (a, b)]
        box = _bbox(pts)
        self.bbox = (box[0] - margin, box[1] - margin,
                     box[2] + margin, box[3] + margin)
        corners = [(self.bbox[0], self.bbox[1]), (self.bbox[0], self.bbox[3]),
                   (self.bbox[2], self.bbox[1]), (self.bbox[2], self.bbox[3])]
        corner_pts = [(F(a), F(b)) for a, b in corners]
        self.insts1 = {i.key(): i for i in
                       enumerate_instances(corner_pts, diagram.lift1)}
        self.insts2 = {i.key(): i for i in
                       enumerate_instances(corner_pts, diagram.lift2)}
        self.crossings: List[ArrCrossing] = []
        self._by1: Dict[tuple, List[ArrCrossing]] = {}
        self._by2: Dict[tuple, List[ArrCrossing]] = {}
        self._collect()

    def _collect(self):
        def with_boxes(segs):
            out = []
            for off, a, b in segs:
                out.append((off, a, b,
                            (min(a[0], b[0]), min(a[1], b[1]),
                             max(a[0], b[0]), max(a[1], b[1]))))
            return out

        segs1 = {k: with_boxes(instance_segments(i, self.bbox))
                 for k, i in self.insts1.items()}
        segs2 = {k: with_boxes(instance_segments(i, self.bbox))
                 for k, i in self.insts2.items()}
        for k1, i1 in self.insts1.items():
            for k2, i2 in self.insts2.items():
                for off1, a1, b1, box1 in segs1[k1]:
                    for off2, a2, b2, box2 in segs2[k2]:
                        if box1[2] < box2[0] or box2[2] < box1[0] or \
                                box1[3] < box2[1] or box2[3] < box1[1]:
                            continue
                        hit = segment_intersection(a1, b1, a2, b2)
                        if hit is None:
                            continue
                        pt, t, s = hit
                        if t == 1 or s == 1:
                            continue
                        c = ArrCrossing(pt, i1, off1 + t, i2, off2 + s)
                        self.crossings.append(c)
                        self._by1.setdefault(k1, []).append(c)
                        self._by2.setdefault(k2, []).append(c)
        for lst in self._by1.values():
            lst.sort(key=lambda c: c.p1)
        for lst in self._by2.values():
            lst.sort(key=lambda c: c.p2)

    # -- identification with downstairs generators --------------------------

    def generator_class(self, c: ArrCrossing) -> Optional[Fraction]:
        """w_param in [0, nseg1) of the downstairs generator this lifts.

        Transport by inst1^{-1} lands on the base lift of curve 1; reduce the
        parameter by the period.  Returns None when the class cannot be
        matched (numerical window edge; callers treat it as unknown).
        """
        nseg1 = self.d.nseg1
        w = c.p1 - math.floor(c.p1 / nseg1) * nseg1
        return w

    def arc1(self, inst: Instance, lo: Fraction, hi: Fraction) -> List[Pt]:
        return [inst.map_point(p) for p in _lift_arc(inst.template, lo, hi)]

    def arc2(self, inst: Instance, lo: Fraction, hi: Fraction) -> List[Pt]:
        return [inst.map_point(p) for p in _lift_arc(inst.template, lo, hi)]

    # -- empty bigons ---------------------------------------------------------

    def empty_bigons(self) -> List[dict]:
        """Two-cornered disks with no lattice point inside.

        Corners are consecutive crossings of one lift of each curve (adjacent
        along both restricted to that pair of lifts); other lifts may cross
        such a disk, but the isotopy across it still cancels the corners, so
        any such disk certifies non-minimal position.
        """
        groups: Dict[tuple, List[ArrCrossing]] = {}
        for c in self.crossings:
            groups.setdefault((c.inst1.key(), c.inst2.key()), []).append(c)
        out = []
        for (k1, k2), lst in groups.items():
            lst.sort(key=lambda c: c.p1)
            order2 = sorted(lst, key=lambda c: c.p2)
            pos2 = {id(c): i for i, c in enumerate(order2)}
            for c1, c2 in zip(lst, lst[1:]):
                if abs(pos2[id(c1)] - pos2[id(c2)]) != 1:
                    continue
                arc_w = self.arc1(c1.inst1, c1.p1, c2.p1)
                lo2, hi2 = sorted((c1.p2, c2.p2))
                arc_i = self.arc2(c1.inst2, lo2, hi2)
                if c1.p2 > c2.p2:
                    arc_i = list(reversed(arc_i))
                polygon = arc_w[:-1] + list(reversed(arc_i))[:-1]
                content = _lattice_content(polygon)
                if not content:
                    out.append(dict(a=c1, b=c2, polygon=polygon))
        return out

    # -- once-punctured bigons ------------------------------------------------

    def punctured_bigons(self, max_span: Optional[Fraction] = None
                         ) -> List[dict]:
        """Once-punctured bigons as reflection-symmetric quadrilaterals.

        A bigon whose boundary loop winds the puncture p once lifts to a
        quadrilateral symmetric under the point reflection rho_p; the search
        keys on that symmetry: corners a, b on one curve-1 lift such that
        rho_p(a) is again a crossing on b's curve-2 lift.  Nested bigons
        (arcs through other intersection points) are included, as in the
        pairing computations of the source configurations.

        Returns dicts with downstairs generator parameters w_a, w_b (each in
        [0, nseg1)), the puncture label, and the quadrilateral polygon.
        """
        point_sets: Dict[tuple, Dict[Pt, ArrCrossing]] = {}
        float_sets: Dict[tuple, List[Tuple[float, float, ArrCrossing]]] = {}
        for c in self.crossings:
            point_sets.setdefault(c.inst2.key(), {})[c.point] = c
            float_sets.setdefault(c.inst2.key(), []).append(
                (float(c.point[0]), float(c.point[1]), c))
        found = {}
        for k1, lst in self._by1.items():
            inst1 = self.insts1[k1]
            n = len(lst)
            floats = [(float(c.point[0]), float(c.point[1])) for c in lst]
            for i in range(n):
                a = lst[i]
                ax, ay = floats[i]
                for j in range(i + 1, n):
                    b = lst[j]
                    if max_span is not None and b.p1 - a.p1 > max_span:
                        break
                    # candidate punctures p must reflect a onto a crossing of
                    # b's second-curve lift: scan those crossings, requiring
                    # the midpoint to be a lattice point (float prefilter)
                    for cx, cy, c in float_sets.get(b.inst2.key(), ()):
                        mx, my = (ax + cx) / 2.0, (ay + cy) / 2.0
                        if abs(mx - round(mx)) > 1e-9 or \
                                abs(my - round(my)) > 1e-9:
                            continue
                        px2 = a.point[0] + c.point[0]
                        py2 = a.point[1] + c.point[1]
                        if px2.denominator != 1 or py2.denominator != 1 or \
                                px2.numerator % 2 or py2.numerator % 2:
                            continue
                        p = (px2.numerator // 2, py2.numerator // 2)
                        wa = self.generator_class(a)
                        wb = self.generator_class(b)
                        key = tuple(sorted((wa, wb))) + (puncture_at(*p),)
                        if key in found:
                            continue
                        quad = self._try_quad(inst1, a, b, p, point_sets)
                        if quad is None:
                            continue
                        found[key] = dict(
                            w_a=wa, w_b=wb, puncture=quad["puncture"],
                            polygon=quad["polygon"])
        return list(found.values())

    def _try_quad(self, inst1: Instance, a: ArrCrossing, b: ArrCrossing,
                  p: Tuple[int, int], point_sets) -> Optional[dict]:
        """Quadrilateral bigon lift: corners a, b, rho_p(b), rho_p(a)."""
        rx, ry = 2 * p[0], 2 * p[1]

        def rho(pt: Pt) -> Pt:
            return (rx - pt[0], ry - pt[1])

        # rho_p must map a to a crossing on b's curve-2 lift
        ra = rho(a.point)
        nb = point_sets.get(b.inst2.key(), {}).get(ra)
        if nb is None:
            return None
        # boundary: arc along inst1 from a to b, arc along b.inst2 from b to
        # rho_p(a), then the rho_p-images of the same two arcs close up.
        arc_top = self.arc1(inst1, a.p1, b.p1)
        lo2, hi2 = sorted((b.p2, nb.p2))
        arc_right = self.arc2(b.inst2, lo2, hi2)
        if b.p2 > nb.p2:
            arc_right = list(reversed(arc_right))
        arc_bottom = [rho(q) for q in arc_top]        # rho(a) -> rho(b)
        arc_left = [rho(q) for q in arc_right]        # rho(b) -> a
        polygon = (arc_top[:-1] + arc_right[:-1]
                   + arc_bottom[:-1] + arc_left[:-1])
        if abs(_winding(polygon, (F(p[0]), F(p[1])))) != 1:
            return None
        content = _lattice_content(polygon)
        if len(content) != 1 or content[0][:2] != p or \
                abs(content[0][2]) != 1 or not _polygon_embedded(polygon):
            return None
        corner_idx = [0]
        for arc in (arc_top, arc_right, arc_bottom):
            corner_idx.append(corner_idx[-1] + len(arc) - 1)
        if not _corners_convex(polygon, corner_idx, content[0][2]):
            return None
        return dict(puncture=puncture_at(*p), polygon=polygon)


def _corners_convex(polygon: Sequence[Pt], corner_idx, winding: int) -> bool:
    """True if the disk has interior angle < pi at each listed vertex.

    winding is the interior multiplicity sign (+1 = counterclockwise
    boundary); a convex corner then turns left (cross > 0)."""
    n = len(polygon)
    for idx in corner_idx:
        c = polygon[idx % n]
        prev_pt = next(polygon[(idx - k) % n] for k in range(1, n)
                       if polygon[(idx - k) % n] != c)
        next_pt = next(polygon[(idx + k) % n] for k in range(1, n)
                       if polygon[(idx + k) % n] != c)
        d_in = _sub(c, prev_pt)
        d_out = _sub(next_pt, c)
        turn = _cross(d_in, d_out)
        if turn == 0 or (turn > 0) != (winding > 0):
            return False
    return True


def _polygon_embedded(polygon: Sequence[Pt]) -> bool:
    """True if the closed polygon is simple (bounds an embedded disk)."""
    n = len(polygon)
    edges = []
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if a != b:
            edges.append((i, a, b))
    m = len(edges)
    for x in range(m):
        i, a1, b1 = edges[x]
        for y in range(x + 1, m):
            j, a2, b2 = edges[y]
            if segments_overlap(a1, b1, a2, b2):
                return False
            hit = segment_intersection(a1, b1, a2, b2)
            if hit is None:
                continue
            pt = hit[0]
            # shared endpoints of consecutive edges are allowed
            if pt in (a1, b1) and pt in (a2, b2):
                continue
            return False
    return True


def _lattice_content(polygon: Sequence[Pt]):
    xs = [q[0] for q in polygon]
    ys = [q[1] for q in polygon]
    out = []
    for cx in range(math.floor(min(xs)), math.ceil(max(xs)) + 1):
        for cy in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
            wn = _winding(polygon, (F(cx), F(cy)))
            if wn:
                out.append((cx, cy, wn))
    return tuple(out)


# ---------------------------------------------------------------------------
# Public operation facade
# ---------------------------------------------------------------------------


def lift(component, primary: bool = True) -> Lift:
    """Canonical lift template of a component (rational: straight line;
    special: zigzag along its axis)."""
    from .lifts import component_lift

    return component_lift(component, primary=primary)


def delta_steps(lift_: Lift):
    """(point, delta) for every crossing of the lift with the grid, relative
    to the first crossing."""
    return [(c.point, c.delta) for c in lift_.crossings]


def alex_steps(lift_: Lift):
    """(point, AlexGrading) for every crossing of the lift with the grid."""
    return [(c.point, c.alex) for c in lift_.crossings]


def domain_alex(polygons) -> AlexGrading:
    """Alexander grading of a domain given as boundary cycles.

    Each cycle is a list of points; multiplicities are winding numbers with
    the clockwise-positive convention.  Additive over cycles.
    """
    eps = F(1, 4096)
    total = AlexGrading()
    for polygon in polygons:
        xs = [q[0] for q in polygon]
        ys = [q[1] for q in polygon]
        for cx in range(math.floor(min(xs)), math.ceil(max(xs)) + 1):
            for cy in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
                s = 0
                for dx in (-eps, eps):
                    for dy in (-eps, eps):
                        s += _winding(polygon, (F(cx) + dx, F(cy) + dy))
                if s:
                    total = total + \
                        AlexGrading.unit(puncture_at(cx, cy)).scale(-s)
    return total


def minimal_intersections(c1, c2):
    """Intersection points of the two components in certified minimal
    position, with relative bigradings; parallel rational input is routed to
    the parallel pairing (no geometric points)."""
    from .pairing import pair_components

    return list(pair_components(c1, c2).generators)


def generator_bigrading(gen: PairGenerator):
    """(AlexGrading, delta) of a generator from minimal_intersections."""
    return (gen.alex, gen.delta)


def find_punctured_bigons(c1, c2):
    """(generator, generator, puncture) triples for every once-punctured
    bigon between the components; used to pair generators into V factors."""
    from .pairing import pair_components

    pairing = pair_components(c1, c2)
    if pairing.diagram is None or not pairing.generators:
        return []
    arr = Arrangement(pairing.diagram)
    gens = {g.w_param: g for g in pairing.generators}
    out = []
    for b in arr.punctured_bigons():
        ga, gb = gens.get(b["w_a"]), gens.get(b["w_b"])
        if ga is not None and gb is not None:
            out.append((ga, gb, b["puncture"]))
    return out
