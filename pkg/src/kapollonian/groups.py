"""Topographical groups, swap-group registries, and the finite-depth audits.

The registry pairs, for each discriminant, the geometric swap generators
(Moebius maps) with their algebraic shadows (integer matrices acting on
cluster columns from the right), the Gram matrix, and the base cluster.  The
audits machine-check the finitely verifiable claims: generator exactness, the
algebraic-geometric correspondence on random words, presentations to bounded
word length, and the sufficiency conditions for swap groups.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .arrangement import build_graph, immediate_tangent
from .circle import (
    INF,
    KPoint,
    MobiusMap,
    OrientedCircle,
    apply_mobius,
    circle_from_matrix,
    ext_mat_identity,
    ext_mat_inverse,
    ext_mat_mul,
    identity_map,
    mobius,
    pedoe_product,
    raw_product4,
    rho,
    s_map,
    tangency_point,
    translation_map,
)
from .clusters import (
    Cluster,
    ClusterSpaceSpec,
    base_cluster,
    cluster_spec,
    default_flavor,
    mobius_gens,
    _sigma_int,
)
from .qint import Disc, disc_cache, ok


# ---------------------------------------------------------------------------
# Topographical groups and the topograph
# ---------------------------------------------------------------------------

GAMMA_GENS = (((-1, 2), (-1, 1)), ((1, -1), (2, -1)), ((0, 1), (-1, 0)))
RHO_GENS = (((-1, 0), (0, 1)), ((-1, 2), (0, 1)), ((-1, 0), (2, 1)))


def topograph_generators():
    """The printed order-two generators (gamma_1..3, rho_1..3)."""
    return GAMMA_GENS, RHO_GENS


def _mat2_mul(a, b):
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0],
         a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0],
         a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _proj_eq2(a, b) -> bool:
    flat_a = a[0] + a[1]
    flat_b = b[0] + b[1]
    return flat_a == flat_b or flat_a == tuple(-x for x in flat_b)


def _prim(vec: tuple[int, int]) -> tuple[int, int]:
    import math

    p, q = vec
    g = math.gcd(p, q)
    if g:
        p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


@dataclass(frozen=True)
class Superbasis:
    """Unordered triple of primitive vectors, pairwise unimodular."""

    vectors: frozenset

    @classmethod
    def of(cls, *vecs) -> "Superbasis":
        prims = frozenset(_prim(tuple(v)) for v in vecs)
        if len(prims) != 3:
            raise ValueError("superbasis needs three distinct points")
        vv = sorted(prims)
        for i in range(3):
            for j in range(i + 1, 3):
                det = vv[i][0] * vv[j][1] - vv[i][1] * vv[j][0]
                if det not in (1, -1):
                    raise ValueError(f"pair {vv[i]}, {vv[j]} is not unimodular")
        return cls(prims)

    @classmethod
    def base(cls) -> "Superbasis":
        return cls.of((0, 1), (1, 1), (1, 0))  # the points 0, 1, infinity

    @classmethod
    def from_matrix(cls, m) -> "Superbasis":
        a = (m[0][0], m[1][0])
        b = (m[0][1], m[1][1])
        return cls.of(a, b, (a[0] + b[0], a[1] + b[1]))

    def matrix(self):
        """Some matrix with column points a, b and a + b in the triple."""
        vv = sorted(self.vectors)
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                a, b = vv[i], vv[j]
                s = _prim((a[0] + b[0], a[1] + b[1]))
                if s in self.vectors and s not in (a, b):
                    return ((a[0], b[0]), (a[1], b[1]))
        raise AssertionError("no ordered representative")

    def neighbors(self) -> list["Superbasis"]:
        """The three adjacent superbases: keep a base {a, b}, flip the third.

        Up to sign the third point is a + b or a - b; the other superbasis
        through the base carries the other choice.
        """
        vv = sorted(self.vectors)
        out = []
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = vv[i], vv[j]
                third = next(t for t in vv if t not in (a, b))
                plus = _prim((a[0] + b[0], a[1] + b[1]))
                minus = _prim((a[0] - b[0], a[1] - b[1]))
                if third == plus:
                    out.append(Superbasis.of(a, b, minus))
                elif third == minus:
                    out.append(Superbasis.of(a, b, plus))
                else:
                    raise AssertionError("triple is not a superbasis")
        return out

    def points(self) -> list:
        """The triple as points of the rational projective line."""
        out = []
        for p, q in sorted(self.vectors):
            out.append(None if q == 0 else Fraction(p, q))
        return out

    def __repr__(self):
        pts = ["oo" if p is None else str(p) for p in self.points()]
        return "{" + ", ".join(pts) + "}"


def topograph_walk(start: Superbasis, word: Sequence[int]) -> Superbasis:
    """Right-multiplication walk: indices 1..3 pick gamma_i."""
    m = start.matrix()
    for i in word:
        m = _mat2_mul(m, GAMMA_GENS[i - 1])
    return Superbasis.from_matrix(m)


@dataclass
class TopographGraph:
    vertices: list
    edges: set
    depth_of: dict


def _mat2_key(m):
    flat = m[0] + m[1]
    first = next(x for x in flat if x)
    return flat if first > 0 else tuple(-x for x in flat)


def topograph_bfs(depth: int, use_generators: bool = True) -> TopographGraph:
    """Breadth-first ball of the topograph around {0, 1, oo}.

    With use_generators the ball is the Cayley ball of the gamma group under
    right multiplication, labeled by superbases (the labeling must stay
    injective); otherwise the intrinsic superbasis adjacency (keep a base,
    replace the third point by the difference) is used.  Both builds must
    agree, which is the content of the topograph equivalence.
    """
    base = Superbasis.base()
    depth_of = {base: 0}
    edges = set()
    if use_generators:
        ident = ((1, 0), (0, 1))
        mat_depth = {_mat2_key(ident): 0}
        label = {_mat2_key(ident): base}
        frontier = [ident]
        for dd in range(1, depth + 1):
            nxt = []
            for m in frontier:
                sb = label[_mat2_key(m)]
                for g in GAMMA_GENS:
                    mg = _mat2_mul(m, g)
                    key = _mat2_key(mg)
                    nb = Superbasis.from_matrix(mg)
                    edges.add(frozenset((sb, nb)))
                    if key not in mat_depth:
                        mat_depth[key] = dd
                        label[key] = nb
                        nxt.append(mg)
                        if nb in depth_of:
                            raise AssertionError(
                                "superbasis labeling not injective on the ball")
                        depth_of[nb] = dd
            frontier = nxt
    else:
        frontier = [base]
        for dd in range(1, depth + 1):
            nxt = []
            for sb in frontier:
                for nb in sb.neighbors():
                    edges.add(frozenset((sb, nb)))
                    if nb not in depth_of:
                        depth_of[nb] = dd
                        nxt.append(nb)
            frontier = nxt
    return TopographGraph(sorted(depth_of, key=lambda s: (depth_of[s], repr(s))),
                          edges, depth_of)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupRegistryEntry:
    disc: Disc
    flavor: str
    spec: ClusterSpaceSpec
    geometric_gens: tuple[MobiusMap, ...]
    base: Cluster
    relations: tuple  # words (tuples of 0-based indices) expected equal in pairs
    free_product: bool

    @property
    def algebraic_gens(self):
        return self.spec.generators

    @property
    def r_matrix(self):
        return self.spec.r_matrix


SUPPORTED_DISCS = (-4, -8, -7, -11, -15, -19, -20, -23, -24)


def registry(disc: Disc, flavor: Optional[str] = None) -> GroupRegistryEntry:
    """The swap-group data for a discriminant (default flavor per field)."""
    if disc.delta == -3:
        raise ValueError("discriminant -3 is excluded")
    flavor = flavor or default_flavor(disc)
    spec = cluster_spec(disc, flavor)
    relations: tuple = ()
    free_product = flavor in ("gaussian", "cube", "tent7", "tent11")
    if flavor == "general":
        # r s1 s2 s3 = s3 s2 s1 r with generators (s1, s2, s3, r)
        relations = (((3, 0, 1, 2), (2, 1, 0, 3)),)
    return GroupRegistryEntry(disc, flavor, spec, mobius_gens(disc, flavor),
                              base_cluster(disc, flavor), relations, free_product)


def registry_all(disc: Disc) -> list[GroupRegistryEntry]:
    """Default entry plus the generic one (distinct groups even for Q(i))."""
    entries = [registry(disc)]
    if default_flavor(disc) != "general":
        entries.append(registry(disc, "general"))
    return entries


# ---------------------------------------------------------------------------
# Audits
# ---------------------------------------------------------------------------


@dataclass
class AuditReport:
    name: str
    passed: bool
    checks: list = field(default_factory=list)  # (label, ok, note)

    def add(self, label: str, ok: bool, note: str = ""):
        self.checks.append((label, bool(ok), note))
        self.passed = self.passed and bool(ok)

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": [
                {"label": lb, "passed": okk, "note": note}
                for lb, okk, note in self.checks
            ],
        }


def check_generator_exactness(entry: GroupRegistryEntry) -> AuditReport:
    """g^2 = I and g^t R g = R for every algebraic generator, exactly."""
    rep = AuditReport(f"generators[{entry.disc.delta}:{entry.flavor}]", True)
    r = entry.r_matrix
    ident = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    for idx, g in enumerate(entry.algebraic_gens):
        sq = tuple(
            tuple(sum(g[i][t] * g[t][j] for t in range(4)) for j in range(4))
            for i in range(4))
        rep.add(f"g{idx + 1}^2 = I", sq == ident)
        gt = tuple(tuple(Fraction(g[j][i]) for j in range(4)) for i in range(4))
        gf = tuple(tuple(Fraction(x) for x in row) for row in g)
        prod = _frac_mm(_frac_mm(gt, r), gf)
        rep.add(f"g{idx + 1}^t R g{idx + 1} = R", prod == r)
    rep.add("base cluster Gram", entry.base.is_valid())
    return rep


def _frac_mm(a, b):
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0])))
        for i in range(len(a)))


def check_correspondence(entry: GroupRegistryEntry, words: int = 100,
                         max_len: int = 8, seed: int = 0) -> AuditReport:
    """sigma_W(rho(m_i)) = g_i, and dual-path agreement on random words.

    The algebraic path multiplies the base columns on the right by the word in
    the integer generators; the geometric path applies rho of the composed
    Moebius word on the left.  Both must give the same matrix, exactly.
    """
    rep = AuditReport(f"correspondence[{entry.disc.delta}:{entry.flavor}]", True)
    disc = entry.disc
    for i, m in enumerate(entry.geometric_gens):
        rep.add(f"sigma(rho(m{i + 1})) = g{i + 1}",
                _sigma_int(disc, entry.base.cols, m) == entry.algebraic_gens[i])
    rng = random.Random(seed)
    ngens = len(entry.geometric_gens)
    rhos = [rho(m) for m in entry.geometric_gens]
    base_vecs = entry.base.minkvecs()
    wmat = tuple(tuple(base_vecs[j][i] for j in range(4)) for i in range(4))
    agree = True
    for _ in range(words):
        word = [rng.randrange(ngens) for _ in range(rng.randint(1, max_len))]
        cl = entry.base
        for i in word:
            cl = cl.swap(i)
        geo = wmat
        for i in reversed(word):
            geo = ext_mat_mul(rhos[i], geo)
        alg_vecs = cl.minkvecs()
        alg = tuple(tuple(alg_vecs[j][i] for j in range(4)) for i in range(4))
        if not all((x - y).is_zero() for ra, rb in zip(geo, alg)
                   for x, y in zip(ra, rb)):
            agree = False
            break
    rep.add(f"dual-path agreement on {words} random words", agree)
    return rep


def check_presentation(entry: GroupRegistryEntry, max_len: int = 8) -> AuditReport:
    """Involutivity, declared relations, and no unexpected short relations.

    For the free-product flavors the ordered-cluster walk is a tree: level d
    of reduced words must have exactly k (k-1)^(d-1) states with no collisions,
    and no reduced word up to max_len may fix the unordered base cluster.
    Freeness beyond that depth is not decidable here.
    """
    rep = AuditReport(f"presentation[{entry.disc.delta}:{entry.flavor}]", True)
    gens = entry.algebraic_gens
    ident = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))

    def mm(a, b):
        return tuple(
            tuple(sum(a[i][t] * b[t][j] for t in range(4)) for j in range(4))
            for i in range(4))

    for idx, g in enumerate(gens):
        rep.add(f"g{idx + 1} has order 2", mm(g, g) == ident and g != ident)
    for left, right in entry.relations:
        lm = ident
        for i in left:
            lm = mm(lm, gens[i])
        rm = ident
        for i in right:
            rm = mm(rm, gens[i])
        rep.add(f"relation {left} = {right}", lm == rm)
    if entry.free_product:
        from .arrangement import _flat_circles, _pack_tools

        k = len(gens)
        gen_programs, circle_programs, _, _ = _pack_tools(
            entry.disc.delta, entry.flavor)
        base16 = tuple(x for col in entry.base.cols for x in col)
        base_set = frozenset(_flat_circles(base16, circle_programs))
        base_curv = tuple(sorted(t[0] for t in base_set))
        level = [(base16, -1)]
        seen = {base16}
        ok_counts = True
        ok_nontrivial = True
        expected = 1
        for depth in range(1, max_len + 1):
            nxt = []
            for cols16, last in level:
                for i in range(k):
                    if i == last:
                        continue
                    new16 = []
                    for cj in gen_programs[i]:
                        a0 = a1 = a2 = a3 = 0
                        for r, cf in cj:
                            b = 4 * r
                            a0 += cf * cols16[b]
                            a1 += cf * cols16[b + 1]
                            a2 += cf * cols16[b + 2]
                            a3 += cf * cols16[b + 3]
                        new16.extend((a0, a1, a2, a3))
                    new16 = tuple(new16)
                    if new16 in seen:
                        ok_counts = False
                        continue
                    seen.add(new16)
                    nxt.append((new16, i))
                    circ = _flat_circles(new16, circle_programs)
                    if tuple(sorted(t[0] for t in circ)) == base_curv and \
                            frozenset(circ) == base_set:
                        ok_nontrivial = False
            expected *= (k - 1) if depth > 1 else k
            if len(nxt) != expected:
                ok_counts = False
            level = nxt
        rep.add(f"reduced words to length {max_len} are pairwise distinct",
                ok_counts)
        rep.add(f"no reduced word to length {max_len} fixes the base cluster",
                ok_nontrivial)
    return rep


def _right_mul(cols, g):
    return tuple(
        tuple(sum(cols[i][t] * g[i][j] for i in range(4)) for t in range(4))
        for j in range(4))


def check_packing_stability(entry: GroupRegistryEntry, bound: int = 12) -> AuditReport:
    """Geometric generators map packing circles back into the packing (desk scale)."""
    from .arrangement import Window, generate_packing

    rep = AuditReport(f"stability[{entry.disc.delta}:{entry.flavor}]", True)
    pk = generate_packing(entry.disc, entry.base, bound)
    win = Window(Fraction(0), Fraction(1), Fraction(-1), Fraction(1))
    wide = Window(Fraction(-4), Fraction(5), Fraction(-2), Fraction(2))
    inside = {c.key for c in pk.unfold(wide)}
    ok_all = True
    for m in entry.geometric_gens:
        for c in pk.unfold(win):
            img = apply_mobius(m, c)
            if abs(img.n) <= bound and circle_in(img, wide):
                if img.key not in inside:
                    ok_all = False
    rep.add(f"generator images of packing circles stay in the packing "
            f"(bound {bound})", ok_all)
    return rep


def circle_in(c, window) -> bool:
    from .arrangement import circle_meets_window

    return circle_meets_window(c, window)


# ---------------------------------------------------------------------------
# Sufficiency audit
# ---------------------------------------------------------------------------


def _prong_superbasis(cluster: Cluster):
    """If the cluster holds a three-prong centred on +-rhat: its tangency triple."""
    circles = cluster.circles()
    center = next((c for c in circles if abs(c.n) == 0 and c.w.v == 0
                   and c.nprime == 0), None)
    if center is None:
        return None
    pts = []
    for c in circles:
        if c.key == center.key:
            continue
        if pedoe_product(center, c) == -1:
            pts.append(tangency_point(center, c))
    if len(pts) < 3:
        return None
    vecs = []
    for p in pts[:3]:
        if p.infinite:
            vecs.append((1, 0))
        else:
            assert p.q == 0, "prong tangency off the real line"
            vecs.append((p.p.numerator, p.p.denominator))
    try:
        return Superbasis.of(*vecs)
    except ValueError:
        return None


def _orbit_ball(entry: GroupRegistryEntry, depth: int):
    level = [entry.base.cols]
    seen = {entry.base.cols}
    out = [entry.base.cols]
    for _ in range(depth):
        nxt = []
        for cols in level:
            for g in entry.algebraic_gens:
                new = _right_mul(cols, g)
                if new not in seen:
                    seen.add(new)
                    nxt.append(new)
        out.extend(nxt)
        level = nxt
    return out


def sufficiency_audit(entry: GroupRegistryEntry, depth: int = 4) -> AuditReport:
    """Machine-checks of the finitely verifiable sufficiency conditions.

    (i) every base circle is reachable from the central circle through
    immediate tangencies inside the cluster; (ii) the base cluster is the
    unique cluster of its type containing the base prong, by exact linear
    solve; (iii) the orbit reaches the three superbases adjacent to
    {0, 1, oo}; (iv) the orbit contains clusters with prongs centred on the
    circles tangent at 0, 1 and oo; (vii) the base cluster is
    tangency-connected.  Freeness-style conditions (v) and (vi) are checked
    only to the stated orbit depth and reported as finite-depth checks.
    """
    rep = AuditReport(f"sufficiency[{entry.disc.delta}:{entry.flavor}]", True)
    disc = entry.disc
    base = entry.base
    circles = base.circles()

    # (i) reachability through immediate tangency, witnessed via the packing
    g = build_graph(circles, "all")
    comp = g.components()
    rep.add("(i) base circles immediately tangency-reachable",
            len(comp) == 1 and _prong_center_ok(entry))

    # (ii) unique completion of the base prong
    count = _prong_completions(entry)
    rep.add("(ii) base cluster is the unique completion of the base prong",
            count == 1, f"{count} completions")

    # (iii) the three adjacent superbases appear in the orbit ball
    targets = {
        Superbasis.of((0, 1), (1, 2), (1, 1)),
        Superbasis.of((1, 1), (2, 1), (1, 0)),
        Superbasis.of((-1, 1), (0, 1), (1, 0)),
    }
    found = set()
    for cols in _orbit_ball(entry, depth):
        sb = _prong_superbasis(Cluster(disc, entry.flavor, cols))
        if sb in targets:
            found.add(sb)
    rep.add("(iii) orbit reaches the three adjacent superbases",
            found == targets, f"found {len(found)}/3 at depth {depth}")

    # (iv) prongs centred on the circles tangent at 0, 1, oo
    rep.add("(iv) orbit holds prongs centred on the immediate neighbours",
            _neighbor_prongs(entry, depth))

    # (v) finite-depth: no nontrivial word fixes the base cluster
    base_set = base.circle_key_set()
    fixers = 0
    for cols in _orbit_ball(entry, depth):
        if cols != base.cols and \
                Cluster(disc, entry.flavor, cols).circle_key_set() == base_set:
            fixers += 1
    rep.add("(v) no automorphism of the base cluster (finite depth)",
            fixers == 0, f"checked to orbit depth {depth} only")

    # (vi) clusters over disjoint prongs centred on rhat share only the centre
    rep.add("(vi) disjoint prongs extend to almost-disjoint clusters "
            "(finite depth)", _prong_disjointness(entry, depth))

    # (vii) tangency-connected
    rep.add("(vii) base cluster tangency-connected", len(comp) == 1)
    return rep


def _base_center(cluster: Cluster) -> OrientedCircle:
    """The +-real-line circle of a base cluster."""
    for c in cluster.circles():
        if c.key in ((0, 0, 1, 0), (0, 0, -1, 0)):
            return c
    raise ValueError("cluster does not contain the real line")


def _prong_center_ok(entry: GroupRegistryEntry) -> bool:
    """The central circle's cluster partners at 0, 1, oo are its immediate tangents."""
    base = entry.base
    circles = base.circles()
    center = _base_center(base)
    ok_all = True
    for other in circles:
        if other.key == center.key or pedoe_product(center, other) != -1:
            continue
        z = tangency_point(center, other)
        expected = immediate_tangent(_witnessed(center), z)
        if expected.key != other.key:
            ok_all = False
    return ok_all


def _witnessed(c: OrientedCircle) -> OrientedCircle:
    """Attach a witness to a raw circle by searching tiny words (desk scale)."""
    if c.witness is not None:
        return c
    disc = c.disc
    gens = [s_map(disc), translation_map(disc, 1), translation_map(disc, -1),
            mobius(disc, 1, (0, 1), 0, 1), mobius(disc, 1, (0, -1), 0, 1),
            mobius(disc, 1, 0, 0, -1)]
    frontier = [identity_map(disc)]
    seen = {frontier[0].key()}
    for _ in range(6):
        nxt = []
        for m in frontier:
            if circle_from_matrix(m).key == c.key:
                return circle_from_matrix(m)
            for g in gens:
                mg = m @ g
                if mg.key() not in seen:
                    seen.add(mg.key())
                    nxt.append(mg)
        frontier = nxt
    raise ValueError(f"no witness found for {c}")


def _prong_completions(entry: GroupRegistryEntry) -> int:
    """Count clusters of the entry's type containing the base prong exactly."""
    import itertools

    disc = entry.disc
    base = entry.base
    circles = base.raw_circles()
    center = _base_center(base).key
    partners = [t for t in circles
                if t != center
                and raw_product4(disc.abs_delta, disc.eps, center, t) == -4][:3]
    prong = [center] + partners
    spec = entry.spec
    n = spec.n_circles
    completions = set()
    # place the prong into cluster slots, solve linearly for the rest
    slots = range(n)
    for assign in itertools.permutations(slots, 4):
        cols = _solve_cluster_from_circles(entry, dict(zip(assign, prong)))
        if cols is None:
            continue
        cl = Cluster(disc, entry.flavor, cols)
        if cl.is_valid():
            try:
                completions.add(cl.circle_key_set())
            except ValueError:
                continue
    return len(completions)


def _solve_cluster_from_circles(entry: GroupRegistryEntry, placed: dict):
    """Solve W from circle_coeffs rows pinned to given circles; None if singular."""
    spec = entry.spec
    rows = []
    rhs = []
    for slot, circ in placed.items():
        rows.append([Fraction(x) for x in spec.circle_coeffs[slot]])
        rhs.append(tuple(2 * x for x in circ))
    # solve rows * cols = rhs for the 4 columns (each coordinate separately)
    import itertools

    mat = rows
    n = len(mat)
    if n != 4:
        return None
    aug = [list(mat[i]) + list(rhs[i]) for i in range(4)]
    for col in range(4):
        piv = next((r for r in range(col, 4) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        f = aug[col][col]
        aug[col] = [x / f for x in aug[col]]
        for r in range(4):
            if r != col and aug[r][col] != 0:
                g = aug[r][col]
                aug[r] = [x - g * y for x, y in zip(aug[r], aug[col])]
    cols = []
    for j in range(4):
        col = []
        for t in range(4):
            val = aug[j][4 + t]
            if val.denominator != 1:
                return None
            col.append(int(val))
        cols.append(tuple(col))
    return tuple(cols)


def _neighbor_prongs(entry: GroupRegistryEntry, depth: int) -> bool:
    """Orbit clusters hold prongs centred on the circles tangent at 0, 1, oo."""
    disc = entry.disc
    base = entry.base
    center = _base_center(base)
    want = set()
    for pt in (KPoint.of(0), KPoint.of(1), INF):
        want.add(immediate_tangent(_witnessed(center), pt).key)
    found = set()
    for cols in _orbit_ball(entry, depth):
        cl = Cluster(disc, entry.flavor, cols)
        circles = cl.circles()
        for cand in circles:
            if cand.key not in want:
                continue
            touching = sum(
                1 for o in circles
                if o.key != cand.key and pedoe_product(cand, o) == -1)
            if touching >= 3:
                found.add(cand.key)
    return found == want


def _prong_disjointness(entry: GroupRegistryEntry, depth: int) -> bool:
    disc = entry.disc
    by_prong = {}
    for cols in _orbit_ball(entry, depth):
        cl = Cluster(disc, entry.flavor, cols)
        sb = _prong_superbasis(cl)
        if sb is not None:
            by_prong.setdefault(sb, []).append(cl.circle_key_set())
    center_keys = {t for t in entry.base.raw_circles() if t[0] == 0}
    prongs = list(by_prong.items())
    for i in range(len(prongs)):
        for j in range(i + 1, len(prongs)):
            sb1, sets1 = prongs[i]
            sb2, sets2 = prongs[j]
            if sb1.vectors & sb2.vectors:
                continue  # prongs share a tangency: not the disjoint case
            for s1 in sets1:
                for s2 in sets2:
                    extra = (s1 & s2) - center_keys
                    if extra:
                        return False
    return True


# ---------------------------------------------------------------------------
# Elementary-subgroup orbit check
# ---------------------------------------------------------------------------


def elementary_orbit_connected(disc: Disc, depth: int = 4) -> bool:
    """Orbit of the real line under <PSL_2(Z), z + tau> stays tangency-connected.

    Tangency-connectivity is a statement about unoriented circles, so edges
    are pairs with |Pedoe product| exactly 1.
    """
    from .circle import rhat

    gens = [s_map(disc), translation_map(disc, 1), translation_map(disc, -1),
            mobius(disc, 1, (0, 1), 0, 1), mobius(disc, 1, (0, -1), 0, 1)]
    frontier = [identity_map(disc)]
    seen = {frontier[0].key()}
    r = rhat(disc)
    circles = {r.unoriented_key(): r}
    for _ in range(depth):
        nxt = []
        for m in frontier:
            for g in gens:
                mg = m @ g
                if mg.key() not in seen:
                    seen.add(mg.key())
                    nxt.append(mg)
                    c = circle_from_matrix(mg)
                    circles.setdefault(c.unoriented_key(), c)
        frontier = nxt
    keys = list(circles)
    d, e = disc.abs_delta, disc.eps
    adj = {k: [] for k in keys}
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1:]:
            if abs(raw_product4(d, e, k1, k2)) == 4:
                adj[k1].append(k2)
                adj[k2].append(k1)
    start = r.unoriented_key()
    comp = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for nb in adj[v]:
            if nb not in comp:
                comp.add(nb)
                stack.append(nb)
    return len(comp) == len(keys)


def full_audit(disc: Disc, flavor: Optional[str] = None,
               words: int = 50) -> list[AuditReport]:
    entry = registry(disc, flavor)
    return [
        check_generator_exactness(entry),
        check_correspondence(entry, words=words),
        check_presentation(entry, max_len=6 if entry.flavor == "cube" else 8),
        sufficiency_audit(entry),
    ]
