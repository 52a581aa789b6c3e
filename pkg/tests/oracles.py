"""Independent oracles for the test suite.

A small diagram engine: rational tangles and pretzel links are built from
explicit twist regions, closed up, oriented by walking the components, and
fed to a Fox-calculus Alexander matrix.  None of this shares code or method
with the curve-pairing engine; it exists to cross-check dimensions,
determinants and Alexander polynomials.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

# ---------------------------------------------------------------------------
# Laurent polynomials over Z (dict degree -> coeff)
# ---------------------------------------------------------------------------


def _norm(p: dict) -> dict:
    return {k: v for k, v in p.items() if v}


def padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return _norm(out)


def pscale(a: dict, c: int) -> dict:
    return {k: c * v for k, v in a.items() if c * v}


def pmul(a: dict, b: dict) -> dict:
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return _norm(out)


def pdivexact(a: dict, b: dict) -> dict:
    """Exact division in Z[t, t^-1]; raises if not divisible."""
    if not b:
        raise ZeroDivisionError
    if not a:
        return {}
    out = {}
    rem = dict(a)
    bdeg = max(b)
    blead = b[bdeg]
    while rem:
        deg = max(rem)
        q, r = divmod(rem[deg], blead)
        if r:
            raise ArithmeticError("non-exact polynomial division")
        shift = deg - bdeg
        out[shift] = q
        rem = padd(rem, pscale({k + shift: v for k, v in b.items()}, -q))
    return _norm(out)


def pdet(matrix: List[List[dict]]) -> dict:
    """Fraction-free (Bareiss) determinant over Z[t, t^-1]."""
    n = len(matrix)
    if n == 0:
        return {0: 1}
    m = [[dict(e) for e in row] for row in matrix]
    prev = {0: 1}
    sign = 1
    for k in range(n - 1):
        if not m[k][k]:
            piv = next((r for r in range(k + 1, n) if m[r][k]), None)
            if piv is None:
                return {}
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = padd(pmul(m[k][k], m[i][j]),
                           pscale(pmul(m[i][k], m[k][j]), -1))
                m[i][j] = pdivexact(num, prev)
        prev = m[k][k]
    return pscale(m[n - 1][n - 1], sign)


def poly_normalize(p: dict) -> Tuple[int, ...]:
    """Coefficients normalized up to +- t^k: lowest degree 0, first coeff > 0."""
    if not p:
        return ()
    lo = min(p)
    coeffs = [p.get(k, 0) for k in range(lo, max(p) + 1)]
    if coeffs[0] < 0 or (coeffs[0] == 0 and sum(coeffs) < 0):
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


def poly_at_minus_one(p: dict) -> int:
    return sum(v * (-1) ** (k % 2) for k, v in p.items())


def poly_symmetric(p: dict) -> bool:
    c = poly_normalize(p)
    return c == tuple(reversed(c)) or \
        tuple(-x for x in reversed(c)) == c


def knot_determinant(poly: dict) -> int:
    return abs(poly_at_minus_one(poly))


# ---------------------------------------------------------------------------
# Diagrams from twist regions
# ---------------------------------------------------------------------------
#
# Every edge has a construction direction with two nodes: (edge, 0) at its
# start, (edge, 1) at its end.  Crossings and boundary joins pair up nodes;
# a closed diagram pairs every node exactly once.  Components are traversed
# through that pairing, giving each edge an orientation +-1 (with/against
# construction); crossing signs combine the stored handedness with the two
# strand orientations.

Node = Tuple[int, int]


class Diagram:
    def __init__(self):
        self.next_edge = 0
        self.crossings: List[dict] = []
        self.pairs: Dict[Node, Node] = {}

    def fresh(self) -> int:
        self.next_edge += 1
        return self.next_edge - 1

    def pair(self, a: Node, b: Node):
        if a in self.pairs or b in self.pairs:
            raise AssertionError("node already connected")
        self.pairs[a] = b
        self.pairs[b] = a

    def add_crossing(self, over: Tuple[Node, Node], under: Tuple[Node, Node],
                     h: int):
        """over/under = (entry node, exit node) in construction direction.

        Exit nodes must be start-nodes of fresh edges.  h is the sign of the
        frame (over direction, under direction) in construction directions.
        """
        self.pair(over[0], over[1])
        self.pair(under[0], under[1])
        self.crossings.append(dict(over=over, under=under, h=h))


class Tangle:
    """A 2-string tangle with dangling boundary nodes nw, ne, sw, se."""

    def __init__(self, d: Diagram):
        self.d = d
        top, bot = d.fresh(), d.fresh()
        self.nw: Node = (top, 0)
        self.ne: Node = (top, 1)
        self.sw: Node = (bot, 0)
        self.se: Node = (bot, 1)

    @staticmethod
    def infinity(d: Diagram) -> "Tangle":
        """The infinity tangle: two vertical strands nw-sw and ne-se."""
        t = Tangle.__new__(Tangle)
        t.d = d
        left, right = d.fresh(), d.fresh()
        t.nw, t.sw = (left, 0), (left, 1)
        t.ne, t.se = (right, 0), (right, 1)
        return t

    def twist_east(self, sign: int):
        """One crossing between the two east strands.

        The strand from the ne slot runs to the new se corner (construction
        direction ~ (1,-1)); the strand from se runs to the new ne corner
        (~ (1,1)).  sign > 0 puts the strand from se on top.
        """
        na, nb = self.ne, self.se
        a2, b2 = self.d.fresh(), self.d.fresh()
        up = (nb, (a2, 0))      # se -> new ne, direction ~ (1, 1)
        down = (na, (b2, 0))    # ne -> new se, direction ~ (1, -1)
        if sign > 0:
            self.d.add_crossing(over=up, under=down, h=-1)
        else:
            self.d.add_crossing(over=down, under=up, h=1)
        self.ne, self.se = (a2, 1), (b2, 1)

    def twist_south(self, sign: int):
        """One crossing between the two south strands.

        The strand from sw runs to the new se corner (~ (1,-1)); the strand
        from se runs to the new sw corner (~ (-1,-1)).  sign > 0 puts the
        strand from se on top.
        """
        na, nb = self.sw, self.se
        a2, b2 = self.d.fresh(), self.d.fresh()
        left = (nb, (a2, 0))    # se -> new sw, direction ~ (-1, -1)
        right = (na, (b2, 0))   # sw -> new se, direction ~ (1, -1)
        if sign > 0:
            self.d.add_crossing(over=left, under=right, h=1)
        else:
            self.d.add_crossing(over=right, under=left, h=-1)
        self.sw, self.se = (a2, 1), (b2, 1)


def rational_moves(p: int, q: int) -> List[Tuple[str, int]]:
    """Twist moves building the p/q tangle from the 0 tangle.

    Semantics: ("H", k) adds k east twists (fraction s -> s + k); ("V", k)
    adds k south twists (s -> s / (1 + k s)).
    """
    moves: List[Tuple[str, int]] = []
    p, q = int(p), int(q)
    if q < 0:
        p, q = -p, -q
    while True:
        if q == 0:
            raise ValueError("infinite slope cannot be built from the 0-tangle")
        if q == 1:
            if p:
                moves.append(("H", p))
            break
        k = p // q
        if k:
            moves.append(("H", k))
        p -= k * q
        if p == 0:
            break
        # now 0 < p < q: strip vertical twists (inverse of s -> s/(1 + m s)
        # is (p, q) -> (p, q - m p)); keep q >= 1
        m = (q - 1) // p if q % p == 0 else q // p
        if m == 0:
            raise AssertionError("euclid step stalled")
        moves.append(("V", m))
        q -= m * p
    return list(reversed(moves))


def fraction_of_moves(moves) -> Tuple[int, int]:
    """Fraction semantics of a move list applied to the 0 tangle."""
    p, q = 0, 1
    for kind, k in moves:
        if kind == "H":
            p += k * q
        else:
            q += k * p
    return p, q


def build_rational(d: Diagram, p: int, q: int) -> Tangle:
    if q == 0:
        return Tangle.infinity(d)
    t = Tangle(d)
    for kind, count in rational_moves(p, q):
        step = 1 if count > 0 else -1
        for _ in range(abs(count)):
            if kind == "H":
                t.twist_east(step)
            else:
                t.twist_south(step)
    return t


def numerator_closure(d: Diagram, t: Tangle):
    d.pair(t.nw, t.ne)
    d.pair(t.sw, t.se)


def tangle_sum_closure(d: Diagram, t1: Tangle, t2: Tangle):
    """N(t1 + t2): east ends of t1 to west ends of t2, then outer closure."""
    d.pair(t1.ne, t2.nw)
    d.pair(t1.se, t2.sw)
    d.pair(t1.nw, t2.ne)
    d.pair(t1.sw, t2.se)


def build_pretzel(d: Diagram, c1: int, c2: int, c3: int):
    """P(c1, c2, c3): three vertical twist columns, tops and bottoms chained."""
    cols = []
    for c in (c1, c2, c3):
        t = Tangle.infinity(d)
        step = 1 if c > 0 else -1
        for _ in range(abs(c)):
            t.twist_south(step)
        cols.append(t)
    a, b, c = cols
    d.pair(a.ne, b.nw)
    d.pair(b.ne, c.nw)
    d.pair(a.se, b.sw)
    d.pair(b.se, c.sw)
    d.pair(a.nw, c.ne)
    d.pair(a.sw, c.se)


# ---------------------------------------------------------------------------
# Orientation, components, Wirtinger arcs, Alexander polynomial
# ---------------------------------------------------------------------------


class _UF:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _closed_components(d: Diagram):
    """(#components, edge orientation dict) of the closed diagram."""
    for e in range(d.next_edge):
        for side in (0, 1):
            if (e, side) not in d.pairs:
                raise AssertionError(f"dangling node {(e, side)}")
    orientation: Dict[int, int] = {}
    count = 0
    for e0 in range(d.next_edge):
        if e0 in orientation:
            continue
        count += 1
        edge, direction = e0, 1
        while True:
            orientation[edge] = direction
            exit_node = (edge, 1 if direction == 1 else 0)
            partner = d.pairs[exit_node]
            nxt_edge, side = partner
            nxt_dir = 1 if side == 0 else -1
            edge, direction = nxt_edge, nxt_dir
            if edge == e0:
                break
    return count, orientation


def _over_arcs(d: Diagram):
    uf = _UF()
    for c in d.crossings:
        uf.union(c["over"][0][0], c["over"][1][0])
    crossing_nodes = set()
    for c in d.crossings:
        for pair in (c["over"], c["under"]):
            crossing_nodes.update(pair)
    for a, b in d.pairs.items():
        if a not in crossing_nodes and b not in crossing_nodes:
            uf.union(a[0], b[0])
    return uf


def alexander_polynomial(d: Diagram) -> dict:
    """Fox-calculus Alexander polynomial (up to units) of a knot diagram."""
    ncomp, orientation = _closed_components(d)
    if ncomp != 1:
        raise ValueError(f"diagram has {ncomp} components (need a knot)")
    uf = _over_arcs(d)
    arcs = sorted({uf.find(e) for e in range(d.next_edge)})
    col = {a: i for i, a in enumerate(arcs)}
    if not d.crossings:
        return {0: 1}
    t = {1: 1}
    one = {0: 1}
    rows = []
    for c in d.crossings:
        (o_in, o_out) = c["over"]
        (u_in, u_out) = c["under"]
        d_over = orientation[o_out[0]]
        d_under = orientation[u_out[0]]
        sign = c["h"] * d_over * d_under
        if d_under == 1:
            e_in, e_out = u_in[0], u_out[0]
        else:
            e_in, e_out = u_out[0], u_in[0]
        over = uf.find(o_in[0])
        a_in, a_out = uf.find(e_in), uf.find(e_out)
        row = [dict() for _ in arcs]
        if sign > 0:
            row[col[a_out]] = padd(row[col[a_out]], pscale(one, -1))
            row[col[a_in]] = padd(row[col[a_in]], t)
            row[col[over]] = padd(row[col[over]], padd(one, pscale(t, -1)))
        else:
            row[col[a_out]] = padd(row[col[a_out]], pscale(t, -1))
            row[col[a_in]] = padd(row[col[a_in]], one)
            row[col[over]] = padd(row[col[over]], padd(t, pscale(one, -1)))
        rows.append(row)
    n = len(arcs)
    if len(rows) != n:
        raise AssertionError(f"{len(rows)} crossings vs {n} arcs")
    minor = [row[1:] for row in rows[:-1]]
    return pdet(minor)


def component_count(d: Diagram) -> int:
    return _closed_components(d)[0]


def two_bridge_alexander(p: int, q: int) -> dict:
    d = Diagram()
    t = build_rational(d, p, q)
    numerator_closure(d, t)
    return alexander_polynomial(d)


def glued_rational_alexander(p1: int, q1: int, p2: int, q2: int) -> dict:
    d = Diagram()
    t1 = build_rational(d, p1, q1)
    t2 = build_rational(d, p2, q2)
    tangle_sum_closure(d, t1, t2)
    return alexander_polynomial(d)


def pretzel_alexander(c1: int, c2: int, c3: int) -> dict:
    d = Diagram()
    build_pretzel(d, c1, c2, c3)
    return alexander_polynomial(d)


# ---------------------------------------------------------------------------
# Bigon-reduction intersection oracle
# ---------------------------------------------------------------------------
#
# Counts minimal intersections of two curve components by a different method
# from the pairing engine: build lifts with deliberately fat parameters (so
# the raw position need not be minimal), list raw crossings of one downstairs
# period against every deck image of the second curve, then cancel empty
# bigons pair by pair until none remain.


def bigon_reduced_count(c1, c2) -> int:
    from tanglecurves.lifts import component_lift, segment_intersection
    from tanglecurves.pairgeom import (
        DegeneratePosition, PairDiagram, _lift_arc,
        _lattice_content, enumerate_instances, instance_segments, _bbox)

    diagram = None
    for v1, v2 in ((2, 3), (3, 4), (1, 5), (0, 0), (4, 2)):
        try:
            l1 = component_lift(c1, primary=True, variant=v1)
            l2 = component_lift(c2, primary=False, variant=v2)
            diagram = PairDiagram(c1, c2, l1, l2)
            break
        except DegeneratePosition:
            continue
    if diagram is None:
        raise RuntimeError("no usable oracle position")
    lift1, lift2 = diagram.lift1, diagram.lift2
    nseg1 = len(lift1.segments)
    window = diagram._window_segments(periods=(0,))
    pts = [p for _, a, b in window for p in (a, b)]
    bbox = _bbox(pts)
    bbox = (bbox[0] - 1, bbox[1] - 1, bbox[2] + 1, bbox[3] + 1)

    per_instance = {}
    for inst in enumerate_instances(pts, lift2):
        recs = []
        for off2, a2, b2 in instance_segments(inst, bbox):
            for off1, a1, b1 in window:
                hit = segment_intersection(a1, b1, a2, b2)
                if hit is None:
                    continue
                pt, t, s = hit
                if t == 1 or s == 1:
                    continue
                if not (0 <= off1 + t < nseg1):
                    continue
                recs.append(dict(w=off1 + t, p2=off2 + s, inst=inst))
        if recs:
            recs.sort(key=lambda r: r["p2"])
            per_instance[inst.key()] = recs

    total = 0
    for key, recs in per_instance.items():
        inst = recs[0]["inst"]
        alive = list(recs)
        changed = True
        while changed and len(alive) >= 2:
            changed = False
            order_w = sorted(alive, key=lambda r: r["w"])
            pos_w = {id(r): i for i, r in enumerate(order_w)}
            for i in range(len(alive) - 1):
                a, b = alive[i], alive[i + 1]
                if abs(pos_w[id(a)] - pos_w[id(b)]) != 1:
                    continue
                lo_w, hi_w = sorted((a["w"], b["w"]))
                arc1 = _lift_arc(lift1, lo_w, hi_w)
                arc2 = [inst.map_point(p)
                        for p in _lift_arc(inst.template, a["p2"], b["p2"])]
                if a["w"] > b["w"]:
                    arc1 = list(reversed(arc1))
                polygon = arc1[:-1] + list(reversed(arc2))[:-1]
                if not _lattice_content(polygon):
                    del alive[i + 1]
                    del alive[i]
                    changed = True
                    break
        total += len(alive)
    return total
