"""Truncated Schmidt arrangements, immediate tangency, packings and their graphs.

Enumeration strategy: every circle of reduced curvature n passes through a
K-point alpha/beta whose denominator satisfies N(beta) <= 2|n|sqrt|D|/sqrt(3)
(the lower-row lattice of a witness has covolume |n|sqrt|D|/2 and a shortest
vector within the hexagonal-lattice Minkowski constant 2/sqrt(3) of it; the
bound here carries an extra factor 2 of slack).  So the coprime pairs with
N(beta) below that bound and alpha/beta near the window reach every circle of
the truncation, and the tangent families through each point fill in the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .circle import (
    INF,
    KPoint,
    MobiusMap,
    OrientedCircle,
    circle_from_matrix,
    interior_sign,
    mink_product,
    mobius,
    pedoe_embed,
    raw_circle,
    raw_product4,
    raw_translate,
    tangency_point,
    v_map,
)
from .clusters import Cluster
from .qint import Disc, OKElem, bezout, coprime, disc_cache, elements_of_norm_up_to, ok


# ---------------------------------------------------------------------------
# Windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle: x in [x0, x1], y in [y0h, y1h] * sqrt|D|."""

    x0: Fraction
    x1: Fraction
    y0h: Fraction
    y1h: Fraction

    def __post_init__(self):
        if self.x0 >= self.x1 or self.y0h >= self.y1h:
            raise ValueError("degenerate window")

    def inflate(self, dx: Fraction, dyh: Fraction) -> "Window":
        return Window(self.x0 - dx, self.x1 + dx, self.y0h - dyh, self.y1h + dyh)

    def contains_point(self, x: Fraction, yh: Fraction) -> bool:
        return self.x0 <= x <= self.x1 and self.y0h <= yh <= self.y1h


def fundamental_window(disc: Disc) -> Window:
    """Bounding box of the fundamental parallelogram spanned by 1 and tau."""
    return Window(Fraction(0), Fraction(1) + Fraction(disc.eps, 2),
                  Fraction(0), Fraction(1, 2))


def circle_meets_window(c: OrientedCircle, win: Window) -> bool:
    """Whether the circle (as a curve) meets the closed rectangle, exactly."""
    d = c.disc.abs_delta
    if c.n == 0:
        if c.w.v == 0:  # horizontal line
            return win.y0h <= c.line_height() <= win.y1h
        # vertical line (only Q(i) can produce these)
        x = Fraction(-c.nprime * c.w.v * d, 4)
        return win.x0 <= x <= win.x1
    xc, yc = c.center_x(), c.center_yhat()
    rsq = c.radius_sq()
    dx = max(win.x0 - xc, Fraction(0), xc - win.x1)
    dy = max(win.y0h - yc, Fraction(0), yc - win.y1h)
    mind = dx * dx + dy * dy * d
    if mind > rsq:
        return False
    maxd = max(
        (xc - cx) ** 2 + (yc - cy) ** 2 * d
        for cx in (win.x0, win.x1) for cy in (win.y0h, win.y1h))
    return rsq <= maxd


@dataclass(frozen=True)
class ArrangementQuery:
    disc: Disc
    max_reduced_curv: int
    window: Optional[Window] = None

    def __post_init__(self):
        if self.max_reduced_curv < 0:
            raise ValueError("curvature bound must be >= 0")

    def resolved_window(self) -> Window:
        return self.window or fundamental_window(self.disc)


def norm_search_bound(disc: Disc, max_curv: int) -> int:
    """Smallest m with 3 m^2 >= 4 B^2 |D|, i.e. ceil(2 B sqrt|D| / sqrt 3)."""
    target = 4 * max_curv * max_curv * disc.abs_delta
    m = math.isqrt(target // 3)
    while 3 * m * m < target:
        m += 1
    return max(m, 1)


# ---------------------------------------------------------------------------
# Tangent families (Prop.-style construction through a fixed K-point)
# ---------------------------------------------------------------------------


def tangent_family(alpha: OKElem, beta: OKElem, u, k: int) -> OrientedCircle:
    """The k-th member of the unit-u family of circles through alpha/beta."""
    disc = alpha.disc
    if isinstance(u, int):
        u = ok(disc, u, 0)
    if u.norm() != 1:
        raise ValueError("u must be a unit")
    sol = bezout(alpha, beta)
    if sol is None:
        raise ValueError("alpha, beta are not coprime")
    gamma, delta = sol
    tau = ok(disc, 0, 1)
    m = MobiusMap(disc, alpha, u * gamma + k * (tau * alpha),
                  beta, u * delta + k * (tau * beta))
    return circle_from_matrix(m)


def _unit_canonical_elem(x: OKElem) -> OKElem:
    for unit in x.disc.units():
        t = unit * x
        if x.disc.delta == -4:
            if t.u > 0 and t.v >= 0:
                return t
        elif t.u > 0 or (t.u == 0 and t.v > 0):
            return t
    raise AssertionError("zero element has no canonical unit form")


def _point_coords(alpha: OKElem, beta: OKElem) -> tuple[Fraction, Fraction]:
    """(x, yh) coordinates of alpha/beta with y = yh sqrt|D|."""
    nb = beta.norm()
    t = alpha * beta.conj()
    e = alpha.disc.eps
    return (Fraction(2 * t.u + e * t.v, 2 * nb), Fraction(t.v, 2 * nb))


def _alpha_box(disc: Disc, beta: OKElem, win: Window):
    """Integer (u, v) box containing beta * win."""
    e, d = disc.eps, disc.abs_delta
    xb = Fraction(2 * beta.u + e * beta.v, 2)
    yb = Fraction(beta.v, 2)
    ss, ts = [], []
    for x in (win.x0, win.x1):
        for y in (win.y0h, win.y1h):
            px = x * xb - y * yb * d
            py = x * yb + y * xb
            t = 2 * py
            s = px - e * py
            ss.append(s)
            ts.append(t)
    return (math.floor(min(ss)), math.ceil(max(ss)),
            math.floor(min(ts)), math.ceil(max(ts)))


def _enum_chunk(delta: int, beta_coords: Sequence[tuple[int, int]],
                max_curv: int, win_tuple) -> list:
    """Circles from the tangent families of the points with these denominators.

    Any circle of reduced curvature n through a point of denominator norm nb
    satisfies 4 n^2 |D| >= 3 nb^2 for the point of minimal denominator, so at
    each point only family members at or above that threshold are new; that
    also caps the circle diameter, giving a tight per-denominator window.
    """
    disc = disc_cache(delta)
    e, dd = disc.eps, disc.abs_delta
    win = Window(*[Fraction(t) for t in win_tuple])
    tau = ok(disc, 0, 1)
    sqf = math.isqrt(dd)
    out = []
    seen = set()
    for bu, bv in beta_coords:
        beta = ok(disc, bu, bv)
        nb = beta.norm()
        t0 = max(1, math.isqrt(3 * nb * nb // (4 * dd)))
        while 4 * t0 * t0 * dd < 3 * nb * nb:
            t0 += 1
        if t0 > max_curv:
            continue
        infl = win.inflate(Fraction(2, t0 * sqf), Fraction(2, t0 * dd))
        s0, s1, tb0, tb1 = _alpha_box(disc, beta, infl)
        for av in range(tb0, tb1 + 1):
            for au in range(s0, s1 + 1):
                alpha = ok(disc, au, av)
                if not coprime(alpha, beta):
                    continue
                x, yh = _point_coords(alpha, beta)
                if not infl.contains_point(x, yh):
                    continue
                gamma, delta_el = bezout(alpha, beta)
                na = alpha.norm()
                w0 = alpha * delta_el.conj() - gamma * beta.conj()
                shift = (alpha * beta.conj()) * OKElem(disc, e, -2)
                n0 = -(beta * delta_el.conj()).v
                np0 = -(alpha * gamma.conj()).v
                kmin = -((max_curv + n0) // nb)
                kmax = (max_curv - n0) // nb
                for k in range(kmin, kmax + 1):
                    n = n0 + k * nb
                    if not t0 <= abs(n) <= max_curv:
                        continue
                    key = (n, np0 + k * na,
                           w0.u + k * shift.u, w0.v + k * shift.v)
                    if key in seen:
                        continue
                    seen.add(key)
                    m = MobiusMap(disc, alpha, gamma + k * (tau * alpha),
                                  beta, delta_el + k * (tau * beta))
                    c = circle_from_matrix(m)
                    assert c.key == key
                    out.append(c)
                    rev = c.reverse()
                    if rev.key not in seen:
                        seen.add(rev.key)
                        out.append(rev)
    return out


def _line_stratum(disc: Disc, win: Window) -> list[OrientedCircle]:
    lo = math.floor(2 * min(win.y0h, -win.y1h)) - 1
    hi = math.ceil(2 * max(win.y1h, -win.y0h)) + 1
    out = []
    for k in range(lo, hi + 1):
        for usign in (1, -1):
            m = mobius(disc, 1, (0, k), 0, usign)
            c = circle_from_matrix(m)
            if circle_meets_window(c, win):
                out.append(c)
    return out


def enumerate_arrangement(query: ArrangementQuery,
                          workers: int = 1) -> dict[tuple, OrientedCircle]:
    """All oriented circles of the arrangement with |n| <= B meeting the window.

    Returns a dict keyed by the canonical circle tuple; every circle carries a
    witness matrix.  Deterministic for any worker count.
    """
    disc = query.disc
    win = query.resolved_window()
    b = query.max_reduced_curv
    found: dict[tuple, OrientedCircle] = {}
    for c in _line_stratum(disc, win):
        found.setdefault(c.key, c)
    if b >= 1:
        nmax = norm_search_bound(disc, b)
        betas = [x for x in elements_of_norm_up_to(disc, nmax)
                 if x == _unit_canonical_elem(x)]
        betas.sort(key=lambda x: (x.norm(), x.u, x.v))
        coords = [(x.u, x.v) for x in betas]
        win_tuple = (win.x0, win.x1, win.y0h, win.y1h)
        if workers <= 1:
            chunks = [_enum_chunk(disc.delta, coords, b, win_tuple)]
        else:
            import multiprocessing

            args = [(disc.delta, coords[i::workers], b, win_tuple)
                    for i in range(workers)]
            with multiprocessing.Pool(workers) as pool:
                chunks = pool.starmap(_enum_chunk, args)
        for chunk in chunks:
            for c in chunk:
                found.setdefault(c.key, c)
    return {
        k: c for k, c in sorted(found.items())
        if circle_meets_window(c, win)
    }


def canonical_circle_order(circles: Iterable[OrientedCircle]) -> list[OrientedCircle]:
    return sorted(circles, key=lambda c: (abs(c.n), c.n, c.w.u, c.w.v, c.nprime))


# ---------------------------------------------------------------------------
# Immediate tangency
# ---------------------------------------------------------------------------


def _plain_witness(c: OrientedCircle) -> MobiusMap:
    if c.witness is None:
        raise ValueError("circle carries no witness matrix")
    m = c.witness
    if m.conj:
        m = m @ mobius(c.disc, 1, 0, 0, -1)
        m = MobiusMap(m.disc, m.a, m.b, m.c, m.d, False)
    return m


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def immediate_tangent(c: OrientedCircle, x: KPoint) -> OrientedCircle:
    """The unique circle of the arrangement immediately tangent to c at x.

    Recolumns the witness by a modular matrix moving infinity to the preimage
    of x, then multiplies by the tangency move [[1, tau], [0, -1]]; applying
    the operation twice at the same point returns the original circle.
    """
    if interior_sign(c, x) != 0:
        raise ValueError(f"{x} does not lie on the circle")
    disc = c.disc
    w = _plain_witness(c)
    xx, yy = x.numerator_pair(disc)
    a_el = w.d * xx - w.b * yy
    b_el = -(w.c * xx) + w.a * yy
    if b_el.is_zero():
        p, q = 1, 0
    else:
        t = a_el * b_el.conj()
        if t.v != 0:
            raise ValueError("preimage of the point is not rational")
        r = Fraction(t.u, b_el.norm())
        p, q = r.numerator, r.denominator
    g, s, tco = _ext_gcd(p, q)
    if g not in (1, -1):
        raise AssertionError("point reduction failed")
    s, tco = s * g, tco * g
    r2, s2 = -tco, s
    # the solution set of p*s2 - q*r2 = 1 is (r2, s2) + k (p, q): reduce
    kk = r2 // p if p != 0 else s2 // q
    r2 -= kk * p
    s2 -= kk * q
    gmat = mobius(disc, p, r2, q, s2)
    return circle_from_matrix(w @ gmat @ v_map(disc))


# ---------------------------------------------------------------------------
# Straddling
# ---------------------------------------------------------------------------


def _positive(c: OrientedCircle) -> OrientedCircle:
    if c.n < 0 or (c.n == 0 and (c.nprime, c.w.u, c.w.v) < (0, 0, 0)):
        return c.reverse()
    return c


def _line_point(c: OrientedCircle) -> KPoint:
    """Some K-point on a line given by its datum."""
    disc = c.disc
    e, q = disc.eps, disc.tau_sq_const
    # z0 = (n'/2) (2 tau - eps) w, a point with Re(conj(a) z0) = b'/2
    w2t = c.w * OKElem(disc, -e, 2)
    return KPoint(Fraction(c.nprime * w2t.u, 2), Fraction(c.nprime * w2t.v, 2))


def _side_of(c: OrientedCircle, other: OrientedCircle) -> Optional[int]:
    """Which open side of c the curve `other` is on (-1 interior, +1 exterior).

    Requires the pair to be tangent or disjoint; distinct Bianchi circles
    always are.  Sides refer to the positively oriented c.
    """
    if c.unoriented_key() == other.unoriented_key():
        return None
    cp, op = _positive(c), _positive(other)
    if cp.n == 0:
        if op.n == 0:
            s = interior_sign(cp, _line_point(op))
            if s == 0:
                raise ValueError("straddling test on crossing lines")
            return s
        x = op.center_x()
        yh = op.center_yhat()
        pt = KPoint(x - Fraction(op.disc.eps) * yh, 2 * yh)
        return interior_sign(cp, pt)
    if op.n == 0:
        return 1
    p4 = raw_product4(c.disc.abs_delta, c.disc.eps, cp.key, op.key)
    if p4 <= -4:
        return 1
    if p4 >= 4:
        return -1 if op.n > cp.n else 1
    raise ValueError("straddling test on crossing circles")


def straddles(circles: Iterable[OrientedCircle], c: OrientedCircle) -> bool:
    """Whether the collection meets both open sides of the circle c."""
    sides = set()
    for other in circles:
        s = _side_of(c, other)
        if s is not None:
            sides.add(s)
        if len(sides) == 2:
            return True
    return False


# ---------------------------------------------------------------------------
# Tangency graphs
# ---------------------------------------------------------------------------


@dataclass
class TangencyGraph:
    disc: Disc
    flavor: str  # "all" or "immediate"
    vertices: dict
    edges: dict  # frozenset({key1, key2}) -> KPoint
    adjacency: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.adjacency:
            adj = {k: [] for k in self.vertices}
            for pair in self.edges:
                k1, k2 = tuple(pair)
                adj[k1].append(k2)
                adj[k2].append(k1)
            self.adjacency = adj

    def components(self) -> list[set]:
        todo = set(self.vertices)
        comps = []
        while todo:
            start = todo.pop()
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for nb in self.adjacency[v]:
                    if nb not in comp:
                        comp.add(nb)
                        stack.append(nb)
                        todo.discard(nb)
            comps.append(comp)
        return comps


def _grid_cell(c: OrientedCircle) -> tuple[int, int]:
    x = c.center_x()
    y = c.center_yhat()
    return (x.numerator // x.denominator, y.numerator // y.denominator)


def build_graph(circles: Iterable[OrientedCircle], flavor: str = "all",
                check_no_crossings: bool = False) -> TangencyGraph:
    """Tangency graph: edges are externally tangent pairs (product exactly -1).

    The "immediate" flavor keeps only edges certified by the witness
    construction: the partner equals the unique immediately tangent circle at
    the shared point.  Candidate pairs come from a unit spatial grid; circles
    further apart than a cell cannot intersect.
    """
    circles = list(circles)
    disc = circles[0].disc if circles else None
    verts = {c.key: c for c in circles}
    bounded: dict[tuple[int, int], list] = {}
    lines = []
    for c in verts.values():
        if c.n == 0:
            lines.append(c)
        else:
            bounded.setdefault(_grid_cell(c), []).append(c)
    pairs = set()
    d, e = (disc.abs_delta, disc.eps) if disc else (0, 0)

    def consider(c1, c2):
        if c1.key >= c2.key:
            c1, c2 = c2, c1
        if (c1.key, c2.key) in pairs:
            return None
        pairs.add((c1.key, c2.key))
        if c1.unoriented_key() == c2.unoriented_key():
            return None
        p4 = raw_product4(d, e, c1.key, c2.key)
        if check_no_crossings and -4 < p4 < 4:
            raise AssertionError(
                f"non-tangent intersection: {c1} {c2} (4<,> = {p4})")
        return (c1, c2) if p4 == -4 else None

    candidates = []
    for (cx, cy), cell in bounded.items():
        neigh = []
        for ddx in (-1, 0, 1):
            for ddy in (-1, 0, 1):
                neigh.extend(bounded.get((cx + ddx, cy + ddy), ()))
        for c1 in cell:
            for c2 in neigh:
                if c1.key < c2.key:
                    hit = consider(c1, c2)
                    if hit:
                        candidates.append(hit)
    for ln in lines:
        for c2 in verts.values():
            if ln.key != c2.key:
                hit = consider(ln, c2)
                if hit:
                    candidates.append(hit)
    edges = {}
    for c1, c2 in candidates:
        z = tangency_point(c1, c2)
        if flavor == "immediate":
            if immediate_tangent(c1, z).key != c2.key:
                continue
        edges[frozenset((c1.key, c2.key))] = z
    return TangencyGraph(disc, flavor, verts, edges)


def verify_tangency_only(circles: Iterable[OrientedCircle]) -> TangencyGraph:
    """Assert no pair of circles has Pedoe product strictly inside (-1, 1).

    Near pairs (shared or adjacent grid cell, or any pair with a line) are
    checked exactly; bounded circles in non-adjacent unit cells are more than
    a diameter sum apart, hence disjoint with product outside [-1, 1].
    """
    return build_graph(circles, "all", check_no_crossings=True)


def cycle_check(graph: TangencyGraph) -> list[list]:
    """Representative cycles, one per independent non-tree edge; [] iff forest."""
    parent = {}
    depth = {}
    cycles = []
    seen = set()
    for root in graph.vertices:
        if root in seen:
            continue
        parent[root] = None
        depth[root] = 0
        seen.add(root)
        stack = [root]
        while stack:
            v = stack.pop()
            for nb in graph.adjacency[v]:
                if nb not in seen:
                    seen.add(nb)
                    parent[nb] = v
                    depth[nb] = depth[v] + 1
                    stack.append(nb)
                elif parent.get(v) != nb and depth.get(nb, 0) <= depth[v]:
                    # non-tree edge: walk both sides up to the common ancestor
                    pa, pb = v, nb
                    left, right = [pa], [pb]
                    while depth[pa] > depth[pb]:
                        pa = parent[pa]
                        left.append(pa)
                    while depth[pb] > depth[pa]:
                        pb = parent[pb]
                        right.append(pb)
                    while pa != pb:
                        pa, pb = parent[pa], parent[pb]
                        left.append(pa)
                        right.append(pb)
                    cycle = left + right[-2::-1]
                    if frozenset(cycle) not in (frozenset(c) for c in cycles):
                        cycles.append(cycle)
    return cycles


# ---------------------------------------------------------------------------
# Ghost circles (disc -15)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GhostCircle:
    """A circle exactly outside the arrangement: centre in K, radius 1/sqrt(15)."""

    center: KPoint
    radius_sq: Fraction

    def minkvec(self, disc: Disc):
        d = disc.abs_delta
        x = self.center.p + self.center.q * Fraction(disc.eps, 2)
        yh = self.center.q * Fraction(1, 2)
        nsq = x * x + yh * yh * d
        from .qint import ext

        b = ext(d, 0, 1)  # curvature sqrt(15)
        bp = ext(d, 0, nsq - self.radius_sq)
        r = ext(d, 0, x)
        m = ext(d, yh * d)
        return (bp, b, r, m)


def ghost_chain(count: int) -> list[GhostCircle]:
    """Translates of the two ghost circles separating the strip for disc -15.

    Returns 2*count + 2 circles in left-to-right order; consecutive circles
    are tangent, and the first two touch exactly at (1 + sqrt(-15))/4 = tau/2.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    disc = disc_cache(-15)
    rsq = Fraction(1, 15)
    gp = GhostCircle(KPoint.of(Fraction(4, 15), Fraction(7, 15)), rsq)
    gpp = GhostCircle(KPoint.of(Fraction(-4, 15), Fraction(8, 15)), rsq)
    prod = mink_product(15, gp.minkvec(disc), gpp.minkvec(disc))
    assert prod.is_rational() and prod.rational() == -1
    assert ghost_tangency_point(gp, gpp, disc) == KPoint.of(0, Fraction(1, 2))
    out = []
    for k in range(count + 1):
        out.append(_ghost_shift(gpp, k))
        out.append(_ghost_shift(gp, k))
    return out


def _ghost_shift(g: GhostCircle, k: int) -> GhostCircle:
    return GhostCircle(KPoint(g.center.p + k, g.center.q), g.radius_sq)


def ghost_tangency_point(g1: GhostCircle, g2: GhostCircle, disc: Disc) -> KPoint:
    v1, v2 = g1.minkvec(disc), g2.minkvec(disc)
    s = tuple(a + b for a, b in zip(v1, v2))
    # lightlike vector: point = a_s / b_s in split coordinates
    b = s[1]
    x = (s[2] / b).rational()
    ratio = s[3] / b  # rational / (q sqrt d) is a pure sqrt-d multiple
    if ratio.p != 0:
        raise ValueError("tangency point is not a K-point")
    yh = ratio.q
    return KPoint(x - Fraction(disc.eps) * yh, 2 * yh)


def ghost_meets_circle(g: GhostCircle, c: OrientedCircle) -> bool:
    """Whether the ghost circle and the Bianchi circle share a point."""
    prod = mink_product(c.disc.abs_delta, g.minkvec(c.disc), pedoe_embed(c))
    r = prod.rational()
    return -1 <= r <= 1


# ---------------------------------------------------------------------------
# Packing generation by swap search
# ---------------------------------------------------------------------------


@dataclass
class PackingResult:
    disc: Disc
    flavor: str
    quotient: bool
    circles: tuple[OrientedCircle, ...]
    clusters_seen: int

    def curvatures(self) -> list[int]:
        return sorted(c.n for c in self.circles)

    def unfold(self, window: Window) -> list[OrientedCircle]:
        """Translates of the stored circles meeting the window."""
        if not self.quotient:
            return canonical_circle_order(
                c for c in self.circles if circle_meets_window(c, window))
        out = {}
        for c in self.circles:
            for m in range(math.floor(window.x0) - 2, math.ceil(window.x1) + 3):
                t = c.translated(m)
                if circle_meets_window(t, window):
                    out.setdefault(t.key, t)
        return canonical_circle_order(out.values())


def _canonical_circle_rep(t, eps: int, absd: int):
    """Shift a raw circle tuple so its x-anchor lies in [0, 1)."""
    n, np_, u, v = t
    if n != 0:
        pos = Fraction(-v, 2 * n)
    elif v != 0:
        pos = Fraction(-np_ * v * absd, 4)
    else:
        return t
    m = pos.numerator // pos.denominator
    return raw_translate(t, -m, eps)


def _pack_tools(delta: int, flavor: str):
    """Sparse integer programs for the swap search, on flat 16-int states."""
    disc = disc_cache(delta)
    from .clusters import cluster_spec

    spec = cluster_spec(disc, flavor)
    circle_programs = []
    for row in spec.circle_coeffs:
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        prog = tuple((j, int(x * den)) for j, x in enumerate(row) if x)
        circle_programs.append((prog, 2 * den))
    gen_programs = []
    for g in spec.generators:
        gen_programs.append(tuple(
            tuple((i, g[i][j]) for i in range(4) if g[i][j]) for j in range(4)))
    return tuple(gen_programs), tuple(circle_programs), disc.eps, disc.abs_delta


def _flat_circles(cols16, circle_programs):
    out = []
    for prog, den in circle_programs:
        a0 = a1 = a2 = a3 = 0
        for j, cf in prog:
            b = 4 * j
            a0 += cf * cols16[b]
            a1 += cf * cols16[b + 1]
            a2 += cf * cols16[b + 2]
            a3 += cf * cols16[b + 3]
        if (a0 % den) or (a1 % den) or (a2 % den) or (a3 % den):
            raise AssertionError("non-integral circle in packing search")
        out.append((a0 // den, a1 // den, a2 // den, a3 // den))
    return out


def _flat_canon(cols16, circles, quotient, eps, absd):
    """Translate so the leftmost circle anchor lies in [0, 1); ints only."""
    if not quotient:
        return cols16, circles
    num = den = None
    for n, np_, u, v in circles:
        if n != 0:
            cn, cd = -v, 2 * n
        elif v != 0:
            cn, cd = -np_ * v * absd, 4
        else:
            continue
        if cd < 0:
            cn, cd = -cn, -cd
        if num is None or cn * den < num * cd:
            num, den = cn, cd
    if num is None:
        return cols16, circles
    m = num // den
    if m == 0:
        return cols16, circles
    out = []
    for j in range(4):
        n, np_, u, v = cols16[4 * j:4 * j + 4]
        out.extend((n, np_ + m * v + m * m * n, u - m * n * eps, v + 2 * m * n))
    new_circles = [raw_translate(t, -m, eps) for t in circles]
    return tuple(out), new_circles


def _pack_expand_chunk(delta, flavor, quotient, bound, entries):
    """Expand one chunk of frontier states: returns (circles kept, successors).

    A swap is followed only when some circle it introduces has absolute
    reduced curvature at most twice the bound: every circle of the packing is
    born in a cluster reached through circles no larger than itself, so the
    search with this prune still sees the whole truncation.
    """
    gen_programs, circle_programs, eps, absd = _pack_tools(delta, flavor)
    slack = 2 * bound
    kept = []
    succ = []
    for cols16, circ, last in entries:
        have = set(circ)
        for t in circ:
            if abs(t[0]) <= bound:
                kept.append(_canonical_circle_rep(t, eps, absd)
                            if quotient else t)
        for gi, prog in enumerate(gen_programs):
            if gi == last:
                continue  # the swaps are involutions: this returns the parent
            new16 = []
            for cj in prog:
                a0 = a1 = a2 = a3 = 0
                for i, cf in cj:
                    b = 4 * i
                    a0 += cf * cols16[b]
                    a1 += cf * cols16[b + 1]
                    a2 += cf * cols16[b + 2]
                    a3 += cf * cols16[b + 3]
                new16.extend((a0, a1, a2, a3))
            new16 = tuple(new16)
            new_circ = _flat_circles(new16, circle_programs)
            ok_new = True
            for t in new_circ:
                if t not in have:
                    ok_new = False
                    if abs(t[0]) <= slack:
                        ok_new = True
                        break
            if not ok_new:
                continue
            canon16, canon_circ = _flat_canon(new16, new_circ, quotient, eps, absd)
            succ.append((canon16, canon_circ, gi))
    return kept, succ


def generate_packing(disc: Disc, base: Cluster, max_reduced_curv: int,
                     quotient: Optional[bool] = None,
                     workers: int = 1) -> PackingResult:
    """Breadth-first search over the swap moves, collecting circles.

    A cluster is expanded while its second-smallest absolute curvature is at
    most twice the bound (the frontier slack; the output filter is exact).
    Strip-type packings are invariant under z -> z + 1 and are searched modulo
    that translation; `quotient` overrides the autodetection.  The result is
    identical for any worker count.
    """
    if not base.is_valid():
        raise ValueError("base is not a valid cluster")
    if max_reduced_curv < 0:
        raise ValueError("curvature bound must be >= 0")
    spec = base.spec
    if quotient is None:
        quotient = any(t[0] == 0 for t in base.raw_circles())
    _, circle_programs, eps, absd = _pack_tools(disc.delta, spec.flavor)
    flat = tuple(x for col in base.cols for x in col)
    canon16, canon_circ = _flat_canon(flat, _flat_circles(flat, circle_programs),
                                      quotient, eps, absd)
    seen = {canon16}
    frontier = [(canon16, canon_circ, None)]
    collected: set[tuple] = set()
    count = 0
    pool = None
    if workers > 1:
        import multiprocessing

        pool = multiprocessing.Pool(workers)
    try:
        while frontier:
            count += len(frontier)
            if pool is None:
                results = [_pack_expand_chunk(disc.delta, spec.flavor, quotient,
                                              max_reduced_curv, frontier)]
            else:
                args = [(disc.delta, spec.flavor, quotient, max_reduced_curv,
                         frontier[i::workers]) for i in range(workers)]
                results = pool.starmap(_pack_expand_chunk, args)
            nxt = []
            for kept, succ in results:
                collected.update(kept)
                for cols16, circ, last in succ:
                    if cols16 not in seen:
                        seen.add(cols16)
                        nxt.append((cols16, circ, last))
            frontier = nxt
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    circles = tuple(raw_circle(disc, t) for t in sorted(collected))
    return PackingResult(disc, spec.flavor, quotient, circles, count)
