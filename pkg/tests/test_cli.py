import io
import json
import sys

import pytest

from kapollonian.cli import (
    UsageError,
    circle_record,
    cluster_from_circles,
    load_circle_records,
    main,
    parse_config,
)
from kapollonian.clusters import base_cluster
from kapollonian.curvlab import bounded_base_cluster
from kapollonian.qint import disc_cache


def run_cli(argv):
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = main(argv)
    finally:
        sys.stdout = old
    return code, buf.getvalue()


def test_arrange_jsonl_roundtrip():
    code, out = run_cli(["arrange", "--disc", "-8", "--max-curv", "4"])
    assert code == 0
    circles = load_circle_records(out.splitlines())
    assert circles
    for c in circles:
        assert c.n * c.nprime * 8 == c.w.norm() - 1
    # sorted by (|n|, n, u, v, n')
    keys = [(abs(c.n), c.n, c.w.u, c.w.v, c.nprime) for c in circles]
    assert keys == sorted(keys)


def test_arrange_deterministic_across_runs_and_workers():
    runs = [run_cli(["arrange", "--disc", "-7", "--max-curv", "6"])[1]
            for _ in range(2)]
    runs.append(run_cli(["arrange", "--disc", "-7", "--max-curv", "6",
                         "--workers", "2"])[1])
    assert runs[0] == runs[1] == runs[2]


def test_arrange_max_curv_zero_lines_only():
    code, out = run_cli(["arrange", "--disc", "-11", "--max-curv", "0"])
    assert code == 0
    assert all(json.loads(line)["n"] == 0 for line in out.splitlines())


def test_arrange_svg_with_ghosts():
    code, out = run_cli(["arrange", "--disc", "-15", "--max-curv", "6",
                         "--out", "svg", "--ghosts", "1"])
    assert code == 0
    assert out.startswith("<svg")
    assert "#e6c619" in out  # ghost overlay color


def test_ghosts_rejected_elsewhere():
    code, _ = run_cli(["arrange", "--disc", "-8", "--max-curv", "3",
                       "--ghosts", "1"])
    assert code == 2


def test_invalid_disc_exits_two():
    code, _ = run_cli(["arrange", "--disc", "-3", "--max-curv", "3"])
    assert code == 2
    code, _ = run_cli(["arrange", "--disc", "-12", "--max-curv", "3"])
    assert code == 2


def test_pack_svg_outer_label():
    code, out = run_cli(["pack", "--disc", "-8", "--base", "bounded",
                         "--max-curv", "50", "--out", "svg", "--labels"])
    assert code == 0
    assert ">-1</text>" in out


def test_pack_deterministic_workers():
    base = ["pack", "--disc", "-8", "--max-curv", "25"]
    one = run_cli(base)[1]
    two = run_cli(base + ["--workers", "2"])[1]
    again = run_cli(base)[1]
    assert one == two == again


def test_pack_base_file_roundtrip(tmp_path):
    d = disc_cache(-8)
    bb = bounded_base_cluster(d)
    path = tmp_path / "base.jsonl"
    path.write_text("".join(circle_record(c) + "\n" for c in bb.circles()))
    code, out = run_cli(["pack", "--disc", "-8", "--base", str(path),
                         "--max-curv", "30"])
    assert code == 0
    code2, out2 = run_cli(["pack", "--disc", "-8", "--base", "bounded",
                           "--max-curv", "30"])
    assert [json.loads(x)["n"] for x in out.splitlines()] == \
        [json.loads(x)["n"] for x in out2.splitlines()]


def test_pack_unknown_base_file():
    code, _ = run_cli(["pack", "--disc", "-8", "--base", "/nonexistent.jsonl",
                       "--max-curv", "10"])
    assert code == 2


def test_cluster_from_circles_all_flavors():
    for delta in (-4, -8, -7, -11, -20):
        d = disc_cache(delta)
        base = base_cluster(d)
        rebuilt = cluster_from_circles(d, list(base.circles()))
        assert rebuilt.circle_key_set() == base.circle_key_set()


def test_verify_single_disc():
    code, out = run_cli(["verify", "--disc", "-19", "--bound", "8"])
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] is True
    assert rep["schema_version"] == 1


def test_residues_json_and_csv():
    code, out = run_cli(["residues", "--disc", "-8", "--modulus", "4",
                         "--bound", "150"])
    assert code == 0
    rep = json.loads(out)
    assert rep["conjecture_modulus"] == {"M": 4, "v2": 2, "v3": 0}
    assert rep["curvature_gcd"] == 1
    assert rep["table_membership"] is True
    code, out = run_cli(["residues", "--disc", "-8", "--modulus", "4",
                         "--bound", "150", "--csv"])
    assert code == 0
    assert out.splitlines()[0] == "residue,count"


def test_residues_bounded_packing():
    code, out = run_cli(["residues", "--disc", "-8", "--modulus", "4",
                         "--bound", "200", "--packing", "bounded"])
    assert code == 0
    rep = json.loads(out)
    assert rep["residues"] == [0, 2, 3]


def test_topograph_depths():
    code, out = run_cli(["topograph", "--depth", "0"])
    rep = json.loads(out)
    assert rep["vertices"] == ["{0, oo, 1}"]
    assert rep["edges"] == []
    code, out = run_cli(["topograph", "--depth", "2"])
    rep = json.loads(out)
    assert len(rep["vertices"]) == 10
    assert len(rep["edges"]) == 9


def test_config_parsing(tmp_path):
    cfg = tmp_path / "conf.toml"
    cfg.write_text(
        "# comment\nwindow = [0, 2, 0, 1/2]\nseed = [0, 1, 1, 0]\n")
    parsed = parse_config(cfg.read_text())
    assert parsed["window"].x1 == 2
    assert parsed["seeds"] == [(0, 1, 1, 0)]
    code, out = run_cli(["arrange", "--disc", "-20", "--max-curv", "2",
                         "--config", str(cfg)])
    assert code == 0
    recs = [json.loads(x) for x in out.splitlines()]
    assert {"disc": -20, "n": 0, "nprime": 1, "w": [1, 0]} in recs


def test_config_rejects_garbage():
    with pytest.raises(UsageError):
        parse_config("windows 0 1 0 1")
    with pytest.raises(UsageError):
        parse_config("mystery = 3")


def test_output_file(tmp_path):
    path = tmp_path / "out.jsonl"
    code, out = run_cli(["arrange", "--disc", "-4", "--max-curv", "2",
                         "--output", str(path)])
    assert code == 0 and out == ""
    assert load_circle_records(path.read_text().splitlines())
