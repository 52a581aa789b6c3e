"""Mapping-class-group action (twisting) and the mirror involution.

Twists act linearly on the covering plane: a matrix M in SL_2(Z) sends the
direction vector (q, p) of a slope p/q to M (q, p)^t, and permutes punctures
through its action on lattice parities.  The mirror is the reflection
(x, y) -> (x, -y), which fixes punctures and parametrizing arcs, negates
slopes and reverses both gradings.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Tuple

from .model import (
    CurveComponent,
    Multicurve,
    OrderedMatching,
    Slope,
    ValidationError,
    puncture_at,
    puncture_parity,
    reduce_slope,
)


@dataclass(frozen=True)
class TwistElement:
    """2x2 integer matrix of determinant 1 acting on the covering plane."""

    matrix: Tuple[Tuple[int, int], Tuple[int, int]]

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if a * d - b * c != 1:
            raise ValidationError("twist matrices must have determinant 1")

    @staticmethod
    def identity() -> "TwistElement":
        return TwistElement(((1, 0), (0, 1)))

    @staticmethod
    def shear(m: int) -> "TwistElement":
        """(x, y) -> (x + m y, y): fixes slope 0, sends infinity to 1/m."""
        return TwistElement(((1, m), (0, 1)))

    @staticmethod
    def rotation() -> "TwistElement":
        """(x, y) -> (-y, x): sends slope s to -1/s."""
        return TwistElement(((0, -1), (1, 0)))

    def __mul__(self, other: "TwistElement") -> "TwistElement":
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        return TwistElement(((a * e + b * g, a * f + b * h),
                             (c * e + d * g, c * f + d * h)))

    def inverse(self) -> "TwistElement":
        (a, b), (c, d) = self.matrix
        return TwistElement(((d, -b), (-c, a)))

    def apply_vector(self, v: Tuple[int, int]) -> Tuple[int, int]:
        (a, b), (c, d) = self.matrix
        return (a * v[0] + b * v[1], c * v[0] + d * v[1])

    def puncture_image(self, label: int) -> int:
        """Induced permutation of punctures via lattice parities."""
        par = puncture_parity(label)
        img = self.apply_vector(par)
        return puncture_at(img[0], img[1])


def twist_slope(s: Slope, t: TwistElement) -> Slope:
    """Image of a slope under the linear action on direction vectors."""
    q, p = t.apply_vector(s.direction())
    if p == 0 and q == 0:  # pragma: no cover - impossible for det 1
        raise ValidationError("twist collapsed a direction")
    return reduce_slope(p, q)


def twist_component(c: CurveComponent, t: TwistElement) -> CurveComponent:
    """Transform slope and (for specials) end labels; length and local
    system are unchanged.  Grading offsets are carried along unchanged."""
    new_slope = twist_slope(c.slope, t)
    if c.is_rational:
        return CurveComponent("rational", new_slope,
                              local_system=c.local_system,
                              alex_offset=c.alex_offset,
                              delta_offset=c.delta_offset)
    new_ends = frozenset(t.puncture_image(e) for e in c.ends)
    return CurveComponent("special", new_slope, c.length, new_ends,
                          local_system=c.local_system,
                          alex_offset=c.alex_offset,
                          delta_offset=c.delta_offset)


def twist_multicurve(m: Multicurve, t: TwistElement) -> Multicurve:
    comps = tuple(twist_component(c, t) for c in m.components)
    pair1 = tuple(t.puncture_image(e) for e in m.matching.pair1)
    pair2 = tuple(t.puncture_image(e) for e in m.matching.pair2)
    return Multicurve(comps, OrderedMatching(pair1, pair2))


def mirror(c: CurveComponent) -> CurveComponent:
    """Mirror involution: slope negates, special ends persist, gradings flip."""
    new_slope = -c.slope
    if c.is_rational:
        return CurveComponent("rational", new_slope,
                              local_system=c.local_system,
                              alex_offset=-c.alex_offset,
                              delta_offset=-c.delta_offset)
    return CurveComponent("special", new_slope, c.length, c.ends,
                          local_system=c.local_system,
                          alex_offset=-c.alex_offset,
                          delta_offset=-c.delta_offset)


def mirror_multicurve(m: Multicurve) -> Multicurve:
    """Component-wise mirror; the matching's pairs persist (the involution
    fixes all four punctures)."""
    return Multicurve(tuple(mirror(c) for c in m.components), m.matching)


def normalize_special(c: CurveComponent) -> Tuple[TwistElement, CurveComponent]:
    """A twist taking a special component to its slope-0 normal form.

    Returns (t, normal) with twist_component(normal, t.inverse())
    reproducing the input... more precisely twist_component(c, t) == normal.
    """
    if c.is_rational:
        raise ValidationError("normalize_special needs a special component")
    q, p = c.slope.direction()
    # find (x, y) with x q + y p = 1; M = [[x, y], [-p, q]] sends (q,p) to (1,0)
    x, y = _bezout(q, p)
    t = TwistElement(((x, y), (-p, q)))
    normal = twist_component(c, t)
    if normal.slope != reduce_slope(0, 1):
        raise ValidationError("normalization failed to reach slope 0")
    return t, normal


def _bezout(a: int, b: int) -> Tuple[int, int]:
    if gcd(abs(a), abs(b)) != 1:
        raise ValidationError("direction vector is not primitive")
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
        old_t, t = t, old_t - quot * t
    if old_r == -1:
        old_s, old_t = -old_s, -old_t
    return (old_s, old_t)
