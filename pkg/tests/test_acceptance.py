"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -s` to see the lines as they pass.
All comparisons are exact (tolerance zero); runtime limits are asserted where
stated.
"""

import io
import sys
import time
from fractions import Fraction

import kapollonian.clusters as CL
from kapollonian.arrangement import (
    ArrangementQuery,
    build_graph,
    cycle_check,
    enumerate_arrangement,
    generate_packing,
    ghost_chain,
    ghost_meets_circle,
    ghost_tangency_point,
    verify_tangency_only,
)
from kapollonian.circle import KPoint, mink_product, raw_translate
from kapollonian.clusters import (
    CUBE_GRAM8,
    TENT7_GRAM5,
    TENT11_GRAM10,
    base_cluster,
    base_cube_columns,
    base_tent11_columns,
    descartes_check,
    gram_of_cols,
)
from kapollonian.curvlab import (
    bounded_base_cluster,
    conjecture_modulus,
    primitivity,
    residue_census,
    table_membership,
)
from kapollonian.groups import (
    Superbasis,
    check_correspondence,
    check_generator_exactness,
    check_presentation,
    registry,
    topograph_bfs,
    topograph_generators,
)
import kapollonian.groups as G
from kapollonian.qint import disc_cache

ALL_DISCS = (-4, -8, -7, -11, -15, -19, -20, -23, -24)
GENERAL_DISCS = (-15, -19, -20, -23, -24)


def report(num, ok, text):
    print(f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"criterion {num}: {text}"


def test_criterion_01_generator_exactness():
    t0 = time.monotonic()
    ok = True
    for delta in ALL_DISCS:
        rep = check_generator_exactness(registry(disc_cache(delta)))
        ok = ok and rep.passed
    elapsed = time.monotonic() - t0
    report(1, ok and elapsed < 1.0,
           f"g^2 = I and g^t R g = R exactly for all registry entries "
           f"({elapsed:.2f}s < 1s)")


def test_criterion_02_printed_matrix_ingestion():
    d8, d7, d11 = disc_cache(-8), disc_cache(-7), disc_cache(-11)
    ok = base_cluster(disc_cache(-4)).is_valid()
    ok = ok and gram_of_cols(d8, base_cube_columns(d8)) == CUBE_GRAM8
    ok = ok and gram_of_cols(
        d7, CL._cols_from_entries(d7, CL._BASETENT7)) == TENT7_GRAM5
    ok = ok and gram_of_cols(d11, base_tent11_columns(d11)) == TENT11_GRAM10
    for delta in ALL_DISCS:
        ok = ok and base_cluster(disc_cache(delta), "general").is_valid()
        ok = ok and base_cluster(disc_cache(delta)).is_valid()
    report(2, ok, "printed base quadruple, cube, tents and the generic base "
                  "clusters all pass exact Gram verification")


def test_criterion_03_correspondence():
    t0 = time.monotonic()
    ok = True
    for delta in ALL_DISCS:
        rep = check_correspondence(registry(disc_cache(delta)), words=100,
                                   max_len=8)
        ok = ok and rep.passed
    elapsed = time.monotonic() - t0
    report(3, ok and elapsed < 10.0,
           f"sigma(rho(m_i)) = g_i and dual-path agreement on 100 words of "
           f"length <= 8 per entry ({elapsed:.2f}s < 10s)")


def test_criterion_04_presentation():
    ok = True
    for delta in GENERAL_DISCS:
        rep = check_presentation(registry(disc_cache(delta)), max_len=8)
        labels = {lb: okk for lb, okk, _ in rep.checks}
        ok = ok and labels["relation (3, 0, 1, 2) = (2, 1, 0, 3)"] and rep.passed
    for delta in (-4, -8, -7, -11):
        rep = check_presentation(registry(disc_cache(delta)), max_len=8)
        ok = ok and rep.passed
    report(4, ok, "r s1 s2 s3 = s3 s2 s1 r exactly for the generic entries; "
                  "free-product flavors act nontrivially through length 8")


def test_criterion_05_arrangement_soundness():
    t0 = time.monotonic()
    ok = True
    for delta in (-4, -8, -7, -11, -15):
        disc = disc_cache(delta)
        a20 = enumerate_arrangement(ArrangementQuery(disc, 20))
        for c in a20.values():
            if c.n * c.nprime * disc.abs_delta != c.w.norm() - 1:
                ok = False
        verify_tangency_only(a20.values())  # raises on a crossing pair
        a40 = enumerate_arrangement(ArrangementQuery(disc, 40))
        sub = {k for k, c in a40.items() if abs(c.n) <= 20}
        ok = ok and sub == set(a20)
    elapsed = time.monotonic() - t0
    report(5, ok and elapsed < 60.0,
           f"B=20 arrangements: circle invariant, tangency-only pairs, "
           f"saturation at 2B ({elapsed:.1f}s < 60s)")


def test_criterion_06_forest_theorem_desk_scale():
    ok = True
    for delta in GENERAL_DISCS:
        disc = disc_cache(delta)
        arr = enumerate_arrangement(ArrangementQuery(disc, 20))
        g = build_graph(arr.values(), "immediate")
        ok = ok and cycle_check(g) == []
    d4 = disc_cache(-4)
    arr4 = enumerate_arrangement(ArrangementQuery(d4, 20))
    g4 = build_graph(arr4.values(), "immediate")
    ok = ok and len(cycle_check(g4)) > 0
    report(6, ok, "immediate graphs acyclic for discs <= -15 at B=20; "
                  "the Gaussian graph contains a cycle")


def test_criterion_07_ghost_chain():
    disc = disc_cache(-15)
    chain = ghost_chain(2)
    gp, gpp = chain[1], chain[0]
    ok = ghost_tangency_point(gpp, gp, disc) == KPoint.of(0, Fraction(1, 2))
    prod = mink_product(15, gp.minkvec(disc), gpp.minkvec(disc))
    ok = ok and prod.rational() == -1
    arr = enumerate_arrangement(ArrangementQuery(disc, 20))
    for g in chain:
        for c in arr.values():
            if ghost_meets_circle(g, c):
                ok = False
    report(7, ok, "ghost circles tangent exactly at (1+sqrt(-15))/4 and "
                  "disjoint from the whole B=20 arrangement")


def soddy_oracle(bound):
    """Independent swap recursion on raw tuples for the Gaussian strip."""
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


def test_criterion_08_descartes_reproduction():
    disc = disc_cache(-4)
    base = base_cluster(disc)
    # walk the quadruple graph, checking the Descartes relation on each state
    seen = {base.canonical_mod_translation()[0].cols}
    frontier = [base.canonical_mod_translation()[0]]
    ok = True
    while frontier:
        nxt = []
        for cl in frontier:
            curv = cl.curvatures()
            if not descartes_check(*curv):
                ok = False
            for i in range(4):
                new = cl.swap(i).canonical_mod_translation()[0]
                fresh = [t for t in new.raw_circles()
                         if t not in set(cl.raw_circles())]
                if fresh and min(abs(t[0]) for t in fresh) > 200:
                    continue
                if new.cols not in seen:
                    seen.add(new.cols)
                    nxt.append(new)
        frontier = nxt
    pk = generate_packing(disc, base, 100)
    ok = ok and pk.curvatures() == soddy_oracle(100)
    report(8, ok, f"Gaussian packing to bound 100 matches the soddy "
                  f"recursion oracle; all {len(seen)} visited quadruples "
                  f"satisfy the Descartes relation exactly")


def test_criterion_09_residues():
    t0 = time.monotonic()
    disc8 = disc_cache(-8)
    pk_bounded = generate_packing(disc8, bounded_base_cluster(disc8), 1000,
                                  quotient=False)
    s4 = residue_census(pk_bounded.circles, 4).residues
    ok = s4 == {0, 2, 3}
    ok = ok and conjecture_modulus(disc_cache(-4))[0] == 24
    ok = ok and conjecture_modulus(disc_cache(-8))[0] == 4
    ok = ok and conjecture_modulus(disc_cache(-19))[0] == 3
    for delta in ALL_DISCS:
        disc = disc_cache(delta)
        m = max(conjecture_modulus(disc)[0], 1)
        pk = generate_packing(disc, base_cluster(disc), 1000)
        rep = residue_census(pk.circles, m, disc=disc, bound=1000)
        ok = ok and table_membership(disc, rep.residues, m)
        ok = ok and primitivity(pk.circles) == 1
    ok = ok and primitivity(pk_bounded.circles) == 1
    elapsed = time.monotonic() - t0
    report(9, ok and elapsed < 60.0,
           f"S4 = {{0,2,3}} for the bounded Q(sqrt-2) packing at bound 1000; "
           f"moduli 24/4/3; table membership and curvature gcd 1 for all "
           f"discs ({elapsed:.1f}s < 60s)")


def test_criterion_10_topograph():
    gammas, _ = topograph_generators()
    prod = G._mat2_mul(G._mat2_mul(gammas[0], gammas[1]), gammas[2])
    ok = G._proj_eq2(prod, ((1, 3), (0, 1)))
    via_gens = topograph_bfs(4)
    via_adj = topograph_bfs(4, use_generators=False)
    ok = ok and set(via_gens.vertices) == set(via_adj.vertices)
    ok = ok and via_gens.edges == via_adj.edges
    ok = ok and len(via_gens.vertices) == 46
    ok = ok and len(via_gens.edges) == 45  # ball of a valence-3 tree
    base = Superbasis.base()
    neighbors = {Superbasis.from_matrix(G._mat2_mul(base.matrix(), g))
                 for g in gammas}
    expected = {
        Superbasis.of((0, 1), (1, 2), (1, 1)),
        Superbasis.of((1, 1), (2, 1), (1, 0)),
        Superbasis.of((-1, 1), (0, 1), (1, 0)),
    }
    ok = ok and neighbors == expected
    report(10, ok, "gamma1 gamma2 gamma3 = [[1,3],[0,1]]; depth-4 ball is an "
                   "acyclic valence-3 graph matching superbasis adjacency; "
                   "one-step neighbors are (0,1/2,1), (1,2,oo), (-1,0,oo)")


def _run_cli(argv):
    from kapollonian.cli import main

    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = main(argv)
    finally:
        sys.stdout = old
    return code, buf.getvalue()


def test_criterion_11_determinism():
    arrange = ["arrange", "--disc", "-7", "--max-curv", "10"]
    outs = [_run_cli(arrange)[1], _run_cli(arrange)[1],
            _run_cli(arrange + ["--workers", "2"])[1],
            _run_cli(arrange + ["--workers", "3"])[1]]
    ok = len(set(outs)) == 1
    pack = ["pack", "--disc", "-8", "--max-curv", "40"]
    pouts = [_run_cli(pack)[1], _run_cli(pack)[1],
             _run_cli(pack + ["--workers", "2"])[1]]
    ok = ok and len(set(pouts)) == 1
    svg = ["arrange", "--disc", "-4", "--max-curv", "8", "--out", "svg"]
    souts = [_run_cli(svg)[1], _run_cli(svg + ["--workers", "2"])[1]]
    ok = ok and len(set(souts)) == 1
    report(11, ok, "arrange and pack output byte-identical across repeated "
                   "runs and worker counts")
