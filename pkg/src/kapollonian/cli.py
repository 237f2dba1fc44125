"""Command line interface: arrangements, packings, audits, censuses, topograph.

Outputs are deterministic: JSON-lines circle records sorted by
(|n|, n, u, v, n'), JSON reports with sorted keys and a schema version, SVG
assembled in canonical order.  Exit codes: 0 success, 1 check failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .arrangement import (
    ArrangementQuery,
    Window,
    build_graph,
    canonical_circle_order,
    cycle_check,
    enumerate_arrangement,
    fundamental_window,
    generate_packing,
    ghost_chain,
    verify_tangency_only,
)
from .circle import OrientedCircle, raw_circle
from .clusters import Cluster, base_cluster, cluster_spec, default_flavor
from .curvlab import (
    SCHEMA_VERSION,
    bounded_base_cluster,
    conjecture_modulus,
    fundamental_census,
    primitivity,
    residue_census,
    table_membership,
)
from .groups import (
    check_correspondence,
    check_generator_exactness,
    check_presentation,
    registry,
    sufficiency_audit,
    topograph_bfs,
)
from .qint import Disc, DiscError, disc_cache, ok

VERIFY_DISCS = (-4, -8, -7, -11, -15, -19, -20, -24)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# circle records
# ---------------------------------------------------------------------------


def circle_record(c: OrientedCircle, packing: Optional[str] = None) -> str:
    rec = {"disc": c.disc.delta, "n": c.n, "nprime": c.nprime,
           "w": [c.w.u, c.w.v]}
    if packing is not None:
        rec["packing"] = packing
    return json.dumps(rec, sort_keys=True)


def load_circle_records(lines) -> list[OrientedCircle]:
    """Parse and validate JSON-lines circle records (invariant re-checked)."""
    out = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        disc = disc_cache(int(rec["disc"]))
        out.append(raw_circle(
            disc, (int(rec["n"]), int(rec["nprime"]),
                   int(rec["w"][0]), int(rec["w"][1]))))
    return out


# ---------------------------------------------------------------------------
# config files: TOML-style key = value lines
# ---------------------------------------------------------------------------


def _parse_rational(tok: str) -> Fraction:
    return Fraction(tok)


def parse_config(text: str) -> dict:
    """window = x0, x1, y0, y1 (y in sqrt|D| units) and repeatable seed lines."""
    out: dict = {"seeds": []}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line without '=': {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        toks = [t for t in value.replace("[", " ").replace("]", " ")
                .replace(",", " ").split() if t]
        if key == "window":
            if len(toks) != 4:
                raise UsageError("window needs four rationals")
            out["window"] = Window(*[_parse_rational(t) for t in toks])
        elif key == "seed":
            if len(toks) != 4:
                raise UsageError("seed needs n nprime u v")
            out["seeds"].append(tuple(int(t) for t in toks))
        else:
            raise UsageError(f"unknown config key {key!r}")
    return out


def _parse_window(spec: str) -> Window:
    toks = spec.split(",")
    if len(toks) != 4:
        raise UsageError("window must be x0,x1,y0,y1")
    return Window(*[_parse_rational(t) for t in toks])


def _get_disc(value) -> Disc:
    try:
        return disc_cache(int(value))
    except DiscError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_arrange(args) -> int:
    disc = _get_disc(args.disc)
    window = _parse_window(args.window) if args.window else None
    seeds = []
    if args.config:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
        window = cfg.get("window", window)
        seeds = cfg["seeds"]
    query = ArrangementQuery(disc, args.max_curv, window)
    found = enumerate_arrangement(query, workers=args.workers)
    circles = list(found.values())
    for t in seeds:
        c = raw_circle(disc, t)
        if c.key not in found:
            circles.append(c)
    circles = canonical_circle_order(circles)
    ghosts = None
    if args.ghosts:
        if disc.delta != -15:
            raise UsageError("--ghosts is defined for disc -15 only")
        ghosts = ghost_chain(args.ghosts)
    if args.out == "jsonl":
        body = "".join(circle_record(c) + "\n" for c in circles)
    else:
        from .render import render_svg

        body = render_svg(circles, query.resolved_window(), disc,
                          ghosts=ghosts)
    _emit(args.output, body)
    return 0


def _resolve_base(disc: Disc, base: str) -> Cluster:
    if base == "fundamental":
        return base_cluster(disc)
    if base == "bounded":
        return bounded_base_cluster(disc)
    try:
        with open(base) as fh:
            circles = load_circle_records(fh)
    except OSError as exc:
        raise UsageError(f"cannot read base file: {exc}") from None
    return cluster_from_circles(disc, circles)


def _rank(rows) -> int:
    work = [list(r) for r in rows]
    rank = 0
    for col in range(4):
        piv = next((i for i in range(rank, len(work)) if work[i][col] != 0),
                   None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        f = work[rank][col]
        work[rank] = [x / f for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col] != 0:
                g = work[i][col]
                work[i] = [x - g * y for x, y in zip(work[i], work[rank])]
        rank += 1
    return rank


def cluster_from_circles(disc: Disc, circles: Sequence[OrientedCircle]) -> Cluster:
    """Rebuild a cluster from its circle records in spec order."""
    spec = cluster_spec(disc)
    if len(circles) != spec.n_circles:
        raise UsageError(
            f"base file must hold {spec.n_circles} circles for this field")
    rows = []
    rhs = []
    for slot in range(spec.n_circles):
        row = [Fraction(x) for x in spec.circle_coeffs[slot]]
        if _rank(rows + [row]) > len(rows):
            rows.append(row)
            rhs.append(tuple(2 * x for x in circles[slot].key))
        if len(rows) == 4:
            break
    if len(rows) < 4:
        raise UsageError("cannot reconstruct columns from the circle list")
    aug = [list(rows[i]) + list(rhs[i]) for i in range(4)]
    for col in range(4):
        piv = next((r for r in range(col, 4) if aug[r][col] != 0), None)
        if piv is None:
            raise UsageError("singular base reconstruction")
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
                raise UsageError("base circles do not span integral columns")
            col.append(int(val))
        cols.append(tuple(col))
    cluster = Cluster(disc, spec.flavor, tuple(cols))
    if not cluster.is_valid():
        raise UsageError("base circles do not form a valid cluster")
    if cluster.circle_key_set() != {c.key for c in circles}:
        raise UsageError("base circles are inconsistent with the cluster type")
    return cluster


def cmd_pack(args) -> int:
    disc = _get_disc(args.disc)
    base = _resolve_base(disc, args.base)
    pk = generate_packing(disc, base, args.max_curv, workers=args.workers)
    window = _parse_window(args.window) if args.window else None
    if window is None:
        window = fundamental_window(disc) if pk.quotient else _bounding_window(pk)
    circles = pk.unfold(window)
    pid = f"{args.base}[{disc.delta}]"
    if args.out == "jsonl":
        body = "".join(circle_record(c, pid) + "\n" for c in circles)
    else:
        from .render import render_svg

        body = render_svg(circles, window, disc, labels=args.labels)
    _emit(args.output, body)
    return 0


def _bounding_window(pk) -> Window:
    xs: list[Fraction] = []
    ys: list[Fraction] = []
    pad = Fraction(1, 10)
    for c in pk.circles:
        if c.n == 0:
            continue
        x, y = c.center_x(), c.center_yhat()
        xs.extend([x - 1, x + 1])
        ys.extend([y - 1, y + 1])
    if not xs:
        return Window(Fraction(-1), Fraction(1), Fraction(-1), Fraction(1))
    return Window(min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)


def cmd_verify(args) -> int:
    deltas = VERIFY_DISCS if args.all else (args.disc,)
    reports = []
    ok_all = True
    for delta in deltas:
        disc = _get_disc(delta)
        entry = registry(disc)
        audits = [
            check_generator_exactness(entry),
            check_correspondence(entry, words=args.words),
            check_presentation(entry,
                               max_len=4 if entry.flavor == "cube" else 6),
            sufficiency_audit(entry),
        ]
        arr = enumerate_arrangement(ArrangementQuery(disc, args.bound))
        graph = verify_tangency_only(arr.values())
        imm = build_graph(arr.values(), "immediate")
        cycles = cycle_check(imm)
        forest_ok = (len(cycles) == 0) == (disc.delta <= -15)
        disc_report = {
            "disc": disc.delta,
            "audits": [a.as_dict() for a in audits],
            "arrangement": {
                "bound": args.bound,
                "circles": len(arr),
                "tangencies": len(graph.edges),
                "immediate_edges": len(imm.edges),
                "cycles": len(cycles),
                "forest_matches_field": forest_ok,
            },
        }
        passed = all(a.passed for a in audits) and forest_ok
        disc_report["passed"] = passed
        ok_all = ok_all and passed
        reports.append(disc_report)
    body = json.dumps({"schema_version": SCHEMA_VERSION, "passed": ok_all,
                       "reports": reports}, sort_keys=True, indent=2)
    _emit(args.output, body + "\n")
    return 0 if ok_all else 1


def cmd_residues(args) -> int:
    disc = _get_disc(args.disc)
    modulus = args.modulus or max(conjecture_modulus(disc)[0], 1)
    if args.packing == "fundamental":
        rep = fundamental_census(disc, modulus, args.bound,
                                 workers=args.workers)
        pk = generate_packing(disc, base_cluster(disc), args.bound,
                              workers=args.workers)
    else:
        bb = bounded_base_cluster(disc)
        pk = generate_packing(disc, bb, args.bound, workers=args.workers)
        rep = residue_census(pk.circles, modulus, disc=disc, bound=args.bound,
                             packing_id=f"bounded[{disc.delta}]")
    m, v2, v3 = conjecture_modulus(disc)
    report = rep.as_dict()
    report["conjecture_modulus"] = {"M": m, "v2": v2, "v3": v3}
    report["table_membership"] = table_membership(disc, rep.residues, modulus) \
        if modulus % max(m, 1) == 0 else None
    report["curvature_gcd"] = primitivity(pk.circles)
    if args.csv:
        _emit(args.output, rep.to_csv())
    else:
        _emit(args.output, json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0 if report["table_membership"] is not False else 1


def cmd_topograph(args) -> int:
    graph = topograph_bfs(args.depth)
    verts = [repr(s) for s in graph.vertices]
    edges = sorted([sorted([repr(a), repr(b)]) for a, b in
                    (tuple(e) for e in graph.edges)])
    body = json.dumps({
        "schema_version": SCHEMA_VERSION,
        "depth": args.depth,
        "vertices": verts,
        "edges": edges,
    }, sort_keys=True, indent=2)
    _emit(args.output, body + "\n")
    return 0


def _emit(path: Optional[str], body: str):
    if path:
        with open(path, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kapollonian",
        description="Exact circle arrangements and Apollonian-type packings "
                    "over imaginary quadratic fields.")
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("arrange", help="enumerate a truncated arrangement")
    pa.add_argument("--disc", required=True, type=int)
    pa.add_argument("--max-curv", type=int, default=20)
    pa.add_argument("--window", help="x0,x1,y0,y1 with y in sqrt|D| units")
    pa.add_argument("--out", choices=("jsonl", "svg"), default="jsonl")
    pa.add_argument("--output", help="output file (default stdout)")
    pa.add_argument("--ghosts", type=int, default=0,
                    help="overlay a ghost chain of this size (disc -15)")
    pa.add_argument("--workers", type=int, default=1)
    pa.add_argument("--config", help="key = value config file")
    pa.set_defaults(func=cmd_arrange)

    pp = sub.add_parser("pack", help="generate one packing by swap search")
    pp.add_argument("--disc", required=True, type=int)
    pp.add_argument("--base", default="fundamental",
                    help="fundamental, bounded, or a circle-record file")
    pp.add_argument("--max-curv", type=int, default=100)
    pp.add_argument("--window", help="x0,x1,y0,y1 with y in sqrt|D| units")
    pp.add_argument("--out", choices=("jsonl", "svg"), default="jsonl")
    pp.add_argument("--labels", action="store_true",
                    help="print reduced curvatures inside circles (svg)")
    pp.add_argument("--output")
    pp.add_argument("--workers", type=int, default=1)
    pp.set_defaults(func=cmd_pack)

    pv = sub.add_parser("verify", help="run the exactness and structure audits")
    group = pv.add_mutually_exclusive_group(required=True)
    group.add_argument("--disc", type=int)
    group.add_argument("--all", action="store_true")
    pv.add_argument("--bound", type=int, default=12,
                    help="arrangement bound for the soundness checks")
    pv.add_argument("--words", type=int, default=40)
    pv.add_argument("--output")
    pv.set_defaults(func=cmd_verify)

    pr = sub.add_parser("residues", help="curvature residue census")
    pr.add_argument("--disc", required=True, type=int)
    pr.add_argument("--modulus", type=int)
    pr.add_argument("--bound", type=int, default=1000)
    pr.add_argument("--packing", choices=("fundamental", "bounded"),
                    default="fundamental")
    pr.add_argument("--csv", action="store_true")
    pr.add_argument("--workers", type=int, default=1)
    pr.add_argument("--output")
    pr.set_defaults(func=cmd_residues)

    pt = sub.add_parser("topograph", help="breadth-first ball of the topograph")
    pt.add_argument("--depth", type=int, default=3)
    pt.add_argument("--output")
    pt.set_defaults(func=cmd_topograph)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DiscError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
