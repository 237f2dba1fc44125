import math
from fractions import Fraction

import pytest

from kapollonian.arrangement import (
    ArrangementQuery,
    Window,
    build_graph,
    circle_meets_window,
    cycle_check,
    enumerate_arrangement,
    fundamental_window,
    generate_packing,
    ghost_chain,
    ghost_meets_circle,
    ghost_tangency_point,
    immediate_tangent,
    norm_search_bound,
    straddles,
    tangent_family,
    verify_tangency_only,
)
from kapollonian.circle import (
    INF,
    KPoint,
    circle_from_matrix,
    identity_map,
    mink_product,
    mobius,
    pedoe_product,
    raw_translate,
    rhat,
    s_map,
    translation_map,
)
from kapollonian.clusters import base_cluster
from kapollonian.qint import disc_cache, ok


# ---------------------------------------------------------------------------
# oracle helpers
# ---------------------------------------------------------------------------


def word_orbit_keys(disc, depth):
    """Circle keys of all words of length <= depth in S, T, T^-1, T_tau, T_tau^-1."""
    gens = [
        s_map(disc),
        translation_map(disc, 1),
        translation_map(disc, -1),
        mobius(disc, 1, (0, 1), 0, 1),
        mobius(disc, 1, (0, -1), 0, 1),
    ]
    frontier = [identity_map(disc)]
    seen_maps = {frontier[0].key()}
    keys = set()
    for _ in range(depth):
        nxt = []
        for m in frontier:
            for g in gens:
                mg = m @ g
                if mg.key() not in seen_maps:
                    seen_maps.add(mg.key())
                    nxt.append(mg)
        frontier = nxt
        for m in frontier:
            c = circle_from_matrix(m)
            keys.add(c.key)
            keys.add(c.reverse().key)
    keys.add((0, 0, 1, 0))
    keys.add((0, 0, -1, 0))
    return keys


def brute_force_candidates(disc, max_curv, window):
    """All integral triples satisfying the circle invariant, meeting the window."""
    from kapollonian.circle import raw_circle

    d = disc.abs_delta
    out = set()
    bound_w = 4 * (max_curv + 2) * d
    for n in range(-max_curv, max_curv + 1):
        for u in range(-bound_w, bound_w + 1):
            for v in range(-bound_w, bound_w + 1):
                nw = ok(disc, u, v).norm()
                if n == 0:
                    if nw != 1:
                        continue
                    nprimes = range(-3 * max_curv - 6, 3 * max_curv + 7)
                else:
                    if (nw - 1) % (n * d) != 0:
                        continue
                    nprimes = [(nw - 1) // (n * d)]
                for np_ in nprimes:
                    try:
                        c = raw_circle(disc, (n, np_, u, v))
                    except ValueError:
                        continue
                    if circle_meets_window(c, window):
                        out.add(c.key)
    return out


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def test_golden_disc4_b1():
    """Small Gaussian truncation against invariant brute force + orbit membership."""
    d = disc_cache(-4)
    win = fundamental_window(d)
    arr = set(enumerate_arrangement(ArrangementQuery(d, 1)))
    cands = brute_force_candidates(d, 1, win)
    orbit = word_orbit_keys(d, 9)
    oracle = cands & orbit
    assert arr == oracle
    # frozen golden: the real line and its translate, the height-one lines,
    # and the four curvature-one circles touching the window, both orientations
    assert len(arr) == 16
    assert (0, 0, 1, 0) in arr
    assert (1, 0, 1, 0) in arr and (1, 0, -1, 0) in arr
    # no vertical lines: the PGL-only families stay out of the arrangement
    assert not any(k[0] == 0 and k[3] != 0 for k in arr)


def test_enumeration_subset_of_orbit():
    for delta in (-8, -11):
        d = disc_cache(delta)
        arr = set(enumerate_arrangement(ArrangementQuery(d, 2)))
        orbit = word_orbit_keys(d, 8)
        assert arr <= orbit


def test_b0_lines_only():
    for delta in (-4, -15):
        d = disc_cache(delta)
        arr = enumerate_arrangement(ArrangementQuery(d, 0))
        assert arr
        assert all(c.n == 0 for c in arr.values())


def test_all_circles_satisfy_invariant_and_are_integral():
    d = disc_cache(-7)
    arr = enumerate_arrangement(ArrangementQuery(d, 10))
    for c in arr.values():
        assert c.n * c.nprime * 7 == c.w.norm() - 1
        assert c.witness is not None


def test_workers_deterministic():
    d = disc_cache(-8)
    one = enumerate_arrangement(ArrangementQuery(d, 12), workers=1)
    three = enumerate_arrangement(ArrangementQuery(d, 12), workers=3)
    assert list(one) == list(three)


def test_saturation_small():
    for delta in (-4, -19):
        d = disc_cache(delta)
        a = set(enumerate_arrangement(ArrangementQuery(d, 6)))
        b = {k for k, c in enumerate_arrangement(ArrangementQuery(d, 12)).items()
             if abs(c.n) <= 6}
        assert a == b


def test_norm_search_bound():
    d = disc_cache(-11)
    m = norm_search_bound(d, 20)
    assert 3 * m * m >= 4 * 400 * 11
    assert 3 * (m - 1) * (m - 1) < 4 * 400 * 11


# ---------------------------------------------------------------------------
# tangent families
# ---------------------------------------------------------------------------


def test_family_through_infinity_is_rhat():
    for delta in (-4, -15):
        d = disc_cache(delta)
        c = tangent_family(ok(d, 1, 0), ok(d, 0, 0), 1, 0)
        assert c.key == (0, 0, 1, 0)


def test_family_through_zero_consecutive_curvatures():
    d = disc_cache(-8)
    ns = [tangent_family(ok(d, 0, 0), ok(d, 1, 0), 1, k).n for k in range(-2, 3)]
    assert all(b - a == 1 for a, b in zip(ns, ns[1:]))  # N(beta) = 1


def test_family_curvature_class_mod_norm():
    d = disc_cache(-4)
    beta = ok(d, 1, 1)  # N = 2
    ns = [tangent_family(ok(d, 1, 0), beta, 1, k).n for k in range(-2, 3)]
    assert len({n % 2 for n in ns}) == 1
    assert all(b - a == 2 for a, b in zip(ns, ns[1:]))


def test_family_rejects_non_coprime():
    d = disc_cache(-8)
    with pytest.raises(ValueError):
        tangent_family(ok(d, 2, 0), ok(d, 0, 1), 1, 0)


def test_family_unit_negation_reverses():
    d = disc_cache(-7)
    a, b = ok(d, 1, 1), ok(d, 2, -1)
    for k in (-1, 0, 2):
        c1 = tangent_family(a, b, 1, k)
        c2 = tangent_family(a, b, -1, -k)
        assert c2.key == c1.reverse().key or c2.key == c1.key


# ---------------------------------------------------------------------------
# immediate tangency
# ---------------------------------------------------------------------------


def test_immediate_tangent_examples():
    d = disc_cache(-15)
    r = rhat(d)
    at_inf = immediate_tangent(r, INF)
    assert at_inf.key == (0, 1, -1, 0)
    at_zero = immediate_tangent(r, KPoint.of(0))
    assert at_zero.n == 1
    assert pedoe_product(r, at_zero) == -1


def test_immediate_tangent_involution():
    d = disc_cache(-11)
    r = rhat(d)
    for pt in (INF, KPoint.of(0), KPoint.of(1), KPoint.of(Fraction(2, 3))):
        c = immediate_tangent(r, pt)
        assert immediate_tangent(c, pt).key == r.key
        c2 = immediate_tangent(c, pt)
        assert immediate_tangent(c2, pt).key == c.key


def test_immediate_tangent_errors():
    d = disc_cache(-8)
    r = rhat(d)
    with pytest.raises(ValueError):
        immediate_tangent(r, KPoint.of(0, Fraction(1, 2)))  # not on the circle
    from kapollonian.circle import raw_circle

    with pytest.raises(ValueError):
        immediate_tangent(raw_circle(d, (0, 1, 1, 0)), INF)  # no witness


def test_immediate_neighbors_distinct():
    d = disc_cache(-7)
    r = rhat(d)
    pts = [KPoint.of(0), KPoint.of(1), KPoint.of(-1), KPoint.of(Fraction(1, 2)), INF]
    keys = [immediate_tangent(r, p).key for p in pts]
    assert len(set(keys)) == len(keys)


# ---------------------------------------------------------------------------
# straddling
# ---------------------------------------------------------------------------


def test_straddles_opposite_lines():
    d = disc_cache(-8)
    r = rhat(d)
    up = r.translated(0)
    from kapollonian.circle import apply_mobius

    above = apply_mobius(mobius(d, 1, (0, 1), 0, 1), r)
    below = apply_mobius(mobius(d, 1, (0, -1), 0, 1), r)
    assert straddles([above, below], r)
    assert not straddles([above], r)


def test_straddles_nested_false():
    d = disc_cache(-4)
    arr = enumerate_arrangement(ArrangementQuery(d, 4))
    from kapollonian.circle import raw_circle

    big = raw_circle(d, (1, 0, 1, 0))
    inside = [c for c in arr.values()
              if c.n > 1 and not straddles([c], big)
              and pedoe_product(big, c) >= 1]
    assert inside  # nested circles exist and are not straddling


def test_base_prong_non_straddling():
    for delta in (-15, -20):
        d = disc_cache(delta)
        circ = list(base_cluster(d, "general").circles())
        for c in circ:
            assert not straddles(circ, c)


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


def test_prong_graph_is_star():
    d = disc_cache(-19)
    circ = base_cluster(d, "general").circles()
    g = build_graph(circ, "all")
    assert len(g.edges) == 3
    center = circ[0].key
    assert all(center in e for e in g.edges)


def test_single_circle_graph():
    d = disc_cache(-8)
    g = build_graph([rhat(d)], "all")
    assert len(g.edges) == 0
    assert cycle_check(g) == []


def test_forest_nonEuclidean_and_loops_gaussian():
    d15 = disc_cache(-15)
    arr = enumerate_arrangement(ArrangementQuery(d15, 10))
    gi = build_graph(arr.values(), "immediate")
    assert cycle_check(gi) == []
    d4 = disc_cache(-4)
    arr4 = enumerate_arrangement(ArrangementQuery(d4, 8))
    gi4 = build_graph(arr4.values(), "immediate")
    assert cycle_check(gi4)


def test_tangency_only_verifier():
    d = disc_cache(-11)
    arr = enumerate_arrangement(ArrangementQuery(d, 8))
    verify_tangency_only(arr.values())


def test_orientations_in_distinct_components():
    d = disc_cache(-8)
    arr = enumerate_arrangement(ArrangementQuery(d, 8))
    g = build_graph(arr.values(), "immediate")
    comp_of = {}
    for i, comp in enumerate(g.components()):
        for k in comp:
            comp_of[k] = i
    for k in arr:
        rev = tuple(-x for x in k)
        if rev in comp_of and len(g.adjacency[k]) > 0 and len(g.adjacency[rev]) > 0:
            assert comp_of[k] != comp_of[rev]


# ---------------------------------------------------------------------------
# ghost circles
# ---------------------------------------------------------------------------


def test_ghost_pair_tangency():
    d = disc_cache(-15)
    g = ghost_chain(0)
    assert len(g) == 2
    assert ghost_tangency_point(g[0], g[1], d) == KPoint.of(0, Fraction(1, 2))


def test_ghost_chain_tangent_neighbors():
    d = disc_cache(-15)
    chain = ghost_chain(3)
    assert len(chain) == 8
    for a, b in zip(chain, chain[1:]):
        prod = mink_product(15, a.minkvec(d), b.minkvec(d))
        assert prod.rational() == -1


def test_ghosts_avoid_arrangement():
    d = disc_cache(-15)
    arr = enumerate_arrangement(ArrangementQuery(d, 12))
    for g in ghost_chain(1):
        for c in arr.values():
            assert not ghost_meets_circle(g, c)


def test_ghost_chain_rejects_negative():
    with pytest.raises(ValueError):
        ghost_chain(-1)


# ---------------------------------------------------------------------------
# packings
# ---------------------------------------------------------------------------


def soddy_oracle(bound):
    """Classical swap recursion on raw circle tuples for the Gaussian strip.

    Tracks whole circles as (n, n', u, v) integers with the linear swap
    x -> 2(sum of others) - x, deduplicates quadruples modulo unit
    translation, and returns the per-period multiset of curvatures.
    """
    d = disc_cache(-4)
    base = tuple(tuple(x // 2 for x in col) for col in base_cluster(d).cols)

    def canon(quad):
        pos = [Fraction(-v, 2 * n) for n, _, u, v in quad if n != 0]
        if not pos:
            return quad
        m = min(pos)
        shift = -(m.numerator // m.denominator)
        if shift == 0:
            return quad
        return tuple(raw_translate(t, shift, 0) for t in quad)

    start = canon(base)
    seen = {start}
    frontier = [start]
    circles = set()
    while frontier:
        nxt = []
        for quad in frontier:
            for t in quad:
                if abs(t[0]) <= bound:
                    circles.add(canon((t,)))
            for i in range(4):
                rest = [quad[j] for j in range(4) if j != i]
                new = tuple(
                    2 * sum(r[k] for r in rest) - quad[i][k] for k in range(4))
                if abs(new[0]) > 2 * bound:
                    continue
                cand = canon(tuple(rest[:i]) + (new,) + tuple(rest[i:]))
                if cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
        frontier = nxt
    return sorted(t[0][0] for t in circles)


def test_packing_matches_soddy_oracle():
    d = disc_cache(-4)
    pk = generate_packing(d, base_cluster(d), 60)
    assert pk.curvatures() == soddy_oracle(60)


def test_packing_quadruples_satisfy_descartes():
    # every visited cluster is Gram-exact by construction; spot check circles
    d = disc_cache(-4)
    pk = generate_packing(d, base_cluster(d), 40)
    for c in pk.circles:
        assert c.n * c.nprime * 4 == c.w.norm() - 1


def test_packing_bound_below_base():
    d = disc_cache(-8)
    pk = generate_packing(d, base_cluster(d), 0)
    assert all(c.n == 0 for c in pk.circles)
    assert len(pk.circles) == 2  # the two lines of the strip


def test_packing_first_shell_disc8():
    d = disc_cache(-8)
    base = base_cluster(d)
    pk = generate_packing(d, base, 3)
    keys = {c.key for c in pk.circles}
    from kapollonian.arrangement import _canonical_circle_rep

    for t in base.raw_circles():
        if abs(t[0]) <= 3:
            assert _canonical_circle_rep(t, 0, 8) in keys
    swaps = [base.swap(i) for i in range(6)]
    for sw in swaps:
        for t in sw.raw_circles():
            if abs(t[0]) <= 3:
                assert _canonical_circle_rep(t, 0, 8) in keys


def test_packing_workers_deterministic():
    d = disc_cache(-8)
    base = base_cluster(d)
    one = generate_packing(d, base, 25, workers=1)
    two = generate_packing(d, base, 25, workers=2)
    assert [c.key for c in one.circles] == [c.key for c in two.circles]


def test_packing_unfold_window():
    d = disc_cache(-4)
    pk = generate_packing(d, base_cluster(d), 10)
    win = Window(Fraction(0), Fraction(3), Fraction(0), Fraction(1, 2))
    unfolded = pk.unfold(win)
    assert len({c.key for c in unfolded}) == len(unfolded)
    assert all(circle_meets_window(c, win) for c in unfolded)
    # curvature-one circles appear once per period
    ones = [c for c in unfolded if c.n == 1]
    assert len(ones) >= 3


def test_packing_saturation_census_style():
    d = disc_cache(-7)
    base = base_cluster(d)
    small = {c.n % 4 for c in generate_packing(d, base, 50).circles}
    big = {c.n % 4 for c in generate_packing(d, base, 100).circles}
    assert small == big
