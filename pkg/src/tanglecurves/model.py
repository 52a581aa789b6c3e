"""Core data model: slopes, punctures, matchings, gradings, curves, bigraded spaces.

Everything here is an immutable value; all arithmetic is exact (integers and
fractions.Fraction).  Alexander gradings are stored as full Z^4 vectors and
reduced lazily against an ordered matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Tuple


class ValidationError(ValueError):
    """A curve collection or input datum violates a structural invariant."""


class InternalAssertionError(AssertionError):
    """The engine detected a state the theory forbids (exit code 3 territory)."""


# ---------------------------------------------------------------------------
# Punctures
# ---------------------------------------------------------------------------

PUNCTURES = (1, 2, 3, 4)

# Lattice parity (x mod 2, y mod 2) -> puncture label, matching the standard
# picture of the plane minus the integer lattice (front face spans a unit
# square whose corners are labelled 1,2,3,4 counterclockwise from top-left).
_PARITY_TO_PUNCTURE = {(0, 0): 1, (0, 1): 2, (1, 1): 3, (1, 0): 4}
_PUNCTURE_TO_PARITY = {v: k for k, v in _PARITY_TO_PUNCTURE.items()}


def puncture_at(x: int, y: int) -> int:
    """Puncture label carried by the lattice point (x, y)."""
    return _PARITY_TO_PUNCTURE[(x % 2, y % 2)]


def puncture_parity(label: int) -> Tuple[int, int]:
    return _PUNCTURE_TO_PARITY[label]


# ---------------------------------------------------------------------------
# Slopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Slope:
    """A reduced fraction p/q in QP^1.  q >= 0 always; infinity is 1/0."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or (self.q == 0 and self.p != 1):
            raise ValidationError(f"non-canonical slope {self.p}/{self.q}")
        if gcd(abs(self.p), self.q) != 1:
            raise ValidationError(f"unreduced slope {self.p}/{self.q}")

    @property
    def is_infinity(self) -> bool:
        return self.q == 0

    def direction(self) -> Tuple[int, int]:
        """Primitive direction vector (run, rise) = (q, p) of the lifted line."""
        return (self.q, self.p)

    def separation_class(self) -> Tuple[int, int]:
        """(q mod 2, p mod 2); determines which puncture pairs the curve separates."""
        return (self.q % 2, self.p % 2)

    def separation_pairs(self) -> Tuple[frozenset, frozenset]:
        """The two puncture pairs separated by a curve of this slope."""
        q2, p2 = self.separation_class()
        first = {puncture_at(0, 0), puncture_at(q2, p2)}
        rest = set(PUNCTURES) - first
        return (frozenset(first), frozenset(rest))

    def __neg__(self) -> "Slope":
        return reduce_slope(-self.p, self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


def reduce_slope(p: int, q: int) -> Slope:
    """Canonical representative of p/q in QP^1.  Rejects (0, 0)."""
    if p == 0 and q == 0:
        raise ValidationError("slope 0/0 is not a point of QP^1")
    if q == 0:
        return Slope(1, 0)
    g = gcd(abs(p), abs(q))
    p, q = p // g, q // g
    if q < 0:
        p, q = -p, -q
    return Slope(p, q)


def det(s1: Slope, s2: Slope) -> int:
    """p1*q2 - p2*q1; zero iff the slopes coincide."""
    return s1.p * s2.q - s2.p * s1.q


# ---------------------------------------------------------------------------
# Ordered matchings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderedMatching:
    """Partition of {1,2,3,4} into two ordered (incoming, outgoing) pairs."""

    pair1: Tuple[int, int]
    pair2: Tuple[int, int]

    def __post_init__(self):
        seen = {*self.pair1, *self.pair2}
        if seen != set(PUNCTURES) or len(self.pair1) != 2 or len(self.pair2) != 2:
            raise ValidationError(f"matching must use each puncture once: {self}")

    @property
    def pairs(self) -> Tuple[frozenset, frozenset]:
        return (frozenset(self.pair1), frozenset(self.pair2))

    def partition(self) -> frozenset:
        return frozenset(self.pairs)

    def epsilons(self) -> Tuple[int, int, int, int]:
        """Sign vector: +1 on incoming punctures, -1 on outgoing."""
        eps = [0, 0, 0, 0]
        for i, o in (self.pair1, self.pair2):
            eps[i - 1] = 1
            eps[o - 1] = -1
        return tuple(eps)

    def relation_basis(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        rels = []
        for i, o in (self.pair1, self.pair2):
            v = [0, 0, 0, 0]
            v[i - 1] += 1
            v[o - 1] += 1
            rels.append(tuple(v))
        return tuple(rels)

    def __str__(self):
        (i1, o1), (i2, o2) = self.pair1, self.pair2
        return f"({i1}->{o1})({i2}->{o2})"


def matching_for_separation(pairs: Tuple[frozenset, frozenset]) -> OrderedMatching:
    """Some ordered matching with the given unordered pairs (ascending order)."""
    (a, b), (c, d) = (sorted(p) for p in pairs)
    return OrderedMatching((a, b), (c, d))


# ---------------------------------------------------------------------------
# Alexander gradings (full Z^4 vectors, reduced lazily)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlexGrading:
    """Element of Z^4 = Z<e1..e4>, compared modulo a matching's relations."""

    vector: Tuple[int, int, int, int] = (0, 0, 0, 0)

    def __add__(self, other: "AlexGrading") -> "AlexGrading":
        return AlexGrading(tuple(a + b for a, b in zip(self.vector, other.vector)))

    def __sub__(self, other: "AlexGrading") -> "AlexGrading":
        return AlexGrading(tuple(a - b for a, b in zip(self.vector, other.vector)))

    def __neg__(self) -> "AlexGrading":
        return AlexGrading(tuple(-a for a in self.vector))

    def scale(self, k: int) -> "AlexGrading":
        return AlexGrading(tuple(k * a for a in self.vector))

    @staticmethod
    def unit(puncture: int) -> "AlexGrading":
        v = [0, 0, 0, 0]
        v[puncture - 1] = 1
        return AlexGrading(tuple(v))


def alex_equal(a: AlexGrading, b: AlexGrading, m: OrderedMatching) -> bool:
    """True iff a - b lies in the relation lattice of the matching m."""
    d = (a - b).vector
    (i1, o1), (i2, o2) = m.pair1, m.pair2
    s, t = d[i1 - 1], d[i2 - 1]
    if d[o1 - 1] != s or d[o2 - 1] != t:
        return False
    v = [0, 0, 0, 0]
    v[i1 - 1] = v[o1 - 1] = s
    v[i2 - 1] = v[o2 - 1] = t
    return tuple(v) == d


def univariate_alex(a: AlexGrading, m: OrderedMatching) -> Fraction:
    """(1/2) * sum_j eps_j a_j with eps = +1 incoming / -1 outgoing."""
    eps = m.epsilons()
    return Fraction(sum(e * c for e, c in zip(eps, a.vector)), 2)


# ---------------------------------------------------------------------------
# Local systems (invertible matrices over F_2, up to similarity)
# ---------------------------------------------------------------------------


def _f2_identity(n: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _f2_det(rows: Sequence[Sequence[int]]) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col]:
                m[r] = [(a ^ b) for a, b in zip(m[r], m[col])]
    return 1


def _f2_charpoly_invariant(rows) -> tuple:
    """Similarity invariant: dimensions of kernels of (M + I)^k over F_2.

    Together with the dimension this separates everything we need (we only
    decide triviality and equality of the small local systems users feed in;
    full rational canonical form is overkill for dims <= 8).
    """
    n = len(rows)
    mi = [[rows[i][j] ^ (1 if i == j else 0) for j in range(n)] for i in range(n)]

    def rank(mat):
        m = [row[:] for row in mat]
        rk = 0
        for col in range(n):
            piv = next((r for r in range(rk, n) if m[r][col]), None)
            if piv is None:
                continue
            m[rk], m[piv] = m[piv], m[rk]
            for r in range(n):
                if r != rk and m[r][col]:
                    m[r] = [(a ^ b) for a, b in zip(m[r], m[rk])]
            rk += 1
        return rk

    def matmul(a, b):
        return [[(sum(a[i][k] & b[k][j] for k in range(n)) & 1) for j in range(n)]
                for i in range(n)]

    out = []
    power = mi
    for _ in range(n):
        out.append(n - rank(power))
        power = matmul(power, mi)
    return tuple(out)


@dataclass(frozen=True)
class LocalSystem:
    """Invertible matrix over F_2; equality of curves tests it up to similarity."""

    matrix: Tuple[Tuple[int, ...], ...] = ((1,),)

    def __post_init__(self):
        n = len(self.matrix)
        if n == 0 or any(len(r) != n for r in self.matrix):
            raise ValidationError("local system matrix must be square and nonempty")
        if any(x not in (0, 1) for r in self.matrix for x in r):
            raise ValidationError("local system entries must be 0 or 1")
        if _f2_det(self.matrix) != 1:
            raise ValidationError("local system matrix must be invertible over F_2")

    @staticmethod
    def trivial(dimension: int = 1) -> "LocalSystem":
        return LocalSystem(_f2_identity(dimension))

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def is_trivial(self) -> bool:
        return self.matrix == _f2_identity(self.dimension)

    def similar_to(self, other: "LocalSystem") -> bool:
        if self.dimension != other.dimension:
            return False
        return (_f2_charpoly_invariant(self.matrix)
                == _f2_charpoly_invariant(other.matrix))

    def hom_dimension(self, other: "LocalSystem") -> int:
        """dim { M over F_2 : X M = M X' }, the flat sections of Hom(X, X')."""
        n, m = self.dimension, other.dimension
        # unknowns M[i][j]; equations sum_k X[i][k] M[k][j] = sum_k M[i][k] X'[k][j]
        rows = []
        for i in range(n):
            for j in range(m):
                row = [0] * (n * m)
                for k in range(n):
                    row[k * m + j] ^= self.matrix[i][k]
                for k in range(m):
                    row[i * m + k] ^= other.matrix[k][j]
                rows.append(row)
        # rank over F_2
        rk, cols = 0, n * m
        mat = [r[:] for r in rows]
        for col in range(cols):
            piv = next((r for r in range(rk, len(mat)) if mat[r][col]), None)
            if piv is None:
                continue
            mat[rk], mat[piv] = mat[piv], mat[rk]
            for r in range(len(mat)):
                if r != rk and mat[r][col]:
                    mat[r] = [(a ^ b) for a, b in zip(mat[r], mat[rk])]
            rk += 1
        return cols - rk


# ---------------------------------------------------------------------------
# Curve components and multicurves
# ---------------------------------------------------------------------------


def admissible_end_pairs(slope: Slope) -> Tuple[frozenset, frozenset]:
    """End pairs a special curve of this slope can connect: the two puncture
    classes joined by lattice lines of the given direction."""
    q2, p2 = slope.separation_class()
    a = frozenset({puncture_at(0, 0), puncture_at(q2, p2)})
    b = frozenset(set(PUNCTURES) - a)
    return (a, b)


@dataclass(frozen=True)
class CurveComponent:
    """A rational or special immersed curve with local system and grading offset.

    kind is "rational" or "special"; length and ends only apply to specials.
    alex_offset/delta_offset shift this component's generators inside pairings
    (the inter-component part of the invariant's relative bigrading).
    """

    kind: str
    slope: Slope
    length: int = 0
    ends: frozenset = frozenset()
    local_system: LocalSystem = LocalSystem.trivial()
    alex_offset: AlexGrading = AlexGrading()
    delta_offset: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in ("rational", "special"):
            raise ValidationError(f"unknown component kind {self.kind!r}")
        if self.kind == "special":
            if self.length < 1:
                raise ValidationError("special component length must be positive")
            if self.ends not in admissible_end_pairs(self.slope):
                raise ValidationError(
                    f"ends {set(self.ends)} inadmissible for slope {self.slope}")
            if not self.local_system.is_trivial:
                raise ValidationError("special components carry trivial local systems")
        else:
            if self.length != 0 or self.ends:
                raise ValidationError("rational components have no length or ends")

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    def parallel_to(self, other: "CurveComponent") -> bool:
        return (self.kind == other.kind and self.slope == other.slope
                and self.length == other.length and self.ends == other.ends)

    def name(self) -> str:
        if self.is_rational:
            base = f"r({self.slope})"
            if not self.local_system.is_trivial or self.local_system.dimension > 1:
                base += f"[{self.local_system.dimension}]"
            return base
        i, j = sorted(self.ends)
        return f"s{self.length}({self.slope};{i},{j})"

    def with_offsets(self, alex: "AlexGrading", delta) -> "CurveComponent":
        return CurveComponent(self.kind, self.slope, self.length, self.ends,
                              self.local_system, _as_alex(alex), Fraction(delta))


def _as_alex(value) -> AlexGrading:
    if isinstance(value, AlexGrading):
        return value
    if isinstance(value, (tuple, list)):
        return AlexGrading(tuple(int(v) for v in value))
    if value == 0:
        return AlexGrading()
    raise ValidationError(f"cannot interpret {value!r} as an Alexander offset")


def rational(p: int, q: int, local_system: Optional[LocalSystem] = None,
             alex_offset=0, delta_offset=0) -> CurveComponent:
    return CurveComponent("rational", reduce_slope(p, q),
                          local_system=local_system or LocalSystem.trivial(),
                          alex_offset=_as_alex(alex_offset),
                          delta_offset=Fraction(delta_offset))


def special(length: int, p: int, q: int, end_i: int, end_j: int,
            alex_offset=0, delta_offset=0) -> CurveComponent:
    return CurveComponent("special", reduce_slope(p, q), length,
                          frozenset({end_i, end_j}),
                          alex_offset=_as_alex(alex_offset),
                          delta_offset=Fraction(delta_offset))


@dataclass(frozen=True)
class Multicurve:
    """A collection of components standing for a tangle invariant (or its mirror).

    Validators run in warning mode by default; under strict=True they raise.
    """

    components: Tuple[CurveComponent, ...]
    matching: OrderedMatching

    def __post_init__(self):
        if not self.components:
            raise ValidationError("multicurve needs at least one component")

    def validate(self, strict: bool = False) -> list:
        """Returns a list of diagnostic strings; raises under strict."""
        problems = []
        # conjugation symmetry: special counts agree across the two end pairs
        from collections import Counter

        counts = Counter()
        for c in self.components:
            if not c.is_rational:
                counts[(c.slope, c.length, c.ends)] += 1
        seen = set()
        for (slope, length, ends), n in counts.items():
            if (slope, length) in seen:
                continue
            seen.add((slope, length))
            a, b = admissible_end_pairs(slope)
            if counts[(slope, length, a)] != counts[(slope, length, b)]:
                problems.append(
                    f"conjugation symmetry fails for s{length}({slope};..): "
                    f"{counts[(slope, length, a)]} vs {counts[(slope, length, b)]}")
        # rational components must separate the matching's pairs
        for c in self.components:
            if c.is_rational:
                if set(c.slope.separation_pairs()) != set(self.matching.pairs):
                    problems.append(
                        f"{c.name()} does not separate the matching {self.matching}")
        # odd number of rationals weighted by local system dimension
        weight = sum(c.local_system.dimension for c in self.components
                     if c.is_rational)
        if weight % 2 == 0:
            problems.append(
                f"rational components have even total weight {weight} (must be odd)")
        if strict and problems:
            raise ValidationError("; ".join(problems))
        return problems

    def name(self) -> str:
        return "{" + ", ".join(c.name() for c in self.components) + "}"


# ---------------------------------------------------------------------------
# Bigraded spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    alex: Fraction
    delta: Fraction
    tag: str = ""


class BigradedSpace:
    """Finite multiset of (alexander, delta)-graded generators.

    All comparisons between spaces are up to a single overall (alex, delta)
    shift.  Canonical form shifts the minimum Alexander grading and the
    minimum delta grading to zero.
    """

    def __init__(self, generators: Iterable[Generator] = ()):  # noqa: D401
        self.generators: Tuple[Generator, ...] = tuple(
            sorted(generators, key=lambda g: (g.alex, g.delta, g.tag)))

    @staticmethod
    def from_pairs(pairs: Iterable[Tuple], tag: str = "") -> "BigradedSpace":
        return BigradedSpace(
            Generator(Fraction(a), Fraction(d), tag) for a, d in pairs)

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def shifted(self, alex_shift, delta_shift) -> "BigradedSpace":
        return BigradedSpace(
            Generator(g.alex + Fraction(alex_shift), g.delta + Fraction(delta_shift),
                      g.tag)
            for g in self.generators)

    def normalized(self) -> "BigradedSpace":
        if not self.generators:
            return self
        min_a = min(g.alex for g in self.generators)
        min_d = min(g.delta for g in self.generators)
        return self.shifted(-min_a, -min_d)

    def gradings(self) -> Tuple[Tuple[Fraction, Fraction], ...]:
        return tuple((g.alex, g.delta) for g in self.generators)

    def equals_up_to_shift(self, other: "BigradedSpace") -> bool:
        return self.normalized().gradings() == other.normalized().gradings()

    def __add__(self, other: "BigradedSpace") -> "BigradedSpace":
        return BigradedSpace((*self.generators, *other.generators))

    def tensor_v(self) -> "BigradedSpace":
        """Tensor with V (two generators, consecutive alex, same delta)."""
        out = []
        for g in self.generators:
            out.append(g)
            out.append(Generator(g.alex + 1, g.delta, g.tag))
        return BigradedSpace(out)

    def mirrored(self) -> "BigradedSpace":
        return BigradedSpace(
            Generator(-g.alex, -g.delta, g.tag) for g in self.generators)

    def alex_support(self) -> list:
        return sorted({g.alex for g in self.generators})

    def __repr__(self):
        inner = ", ".join(f"({g.alex},{g.delta})" for g in self.generators)
        return f"BigradedSpace[{inner}]"


class NotDivisibleError(ValueError):
    """strip_V found no W with W (x) V isomorphic to the input."""


def strip_V(space: BigradedSpace) -> BigradedSpace:
    """Inverse of tensoring with V, unique up to relative shift.

    Works delta-slice by delta-slice: each slice, read as a polynomial in t
    with exponents the Alexander gradings, must be divisible by (1 + t).
    """
    from collections import Counter

    if space.is_zero():
        return space
    slices = {}
    for g in space.generators:
        slices.setdefault(g.delta, Counter())[g.alex] += 1
    out = []
    for delta, counter in slices.items():
        counter = Counter(counter)
        while counter:
            a = min(counter)
            c = counter[a]
            if c <= 0:
                raise NotDivisibleError("negative coefficient while dividing by V")
            out.extend(Generator(a, delta) for _ in range(c))
            counter[a] -= c
            counter[a + 1] -= c
            counter = Counter({k: v for k, v in counter.items() if v != 0})
            if any(v < 0 for v in counter.values()):
                raise NotDivisibleError(
                    "space is not of the form W tensor V "
                    "(glued object is not a knot-type pairing)")
    return BigradedSpace(out)
