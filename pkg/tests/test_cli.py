import io
import json
import subprocess
import sys

import pytest

from drgcert.cli import main, sniff_format
from drgcert.fixtures import FIXTURE_DIR
from drgcert.graph import build_named, encode_graph6, format_edge_list, parse_graph6


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sniff_format():
    assert sniff_format("# c\n\n5\n0 1\n") == "edgelist"
    assert sniff_format("Dhc\n") == "graph6"
    assert sniff_format(">>graph6<<Dhc") == "graph6"


def test_analyze_family_text(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "petersen", "--output", "text")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith(
        "DISTANCE-REGULAR (oracle) - certified by: girth-theorem, odd-girth-theorem")


def test_analyze_fixture_file_json(capsys):
    code, out, _ = run(capsys, "analyze", "-i", str(FIXTURE_DIR / "hoffman.el"), "--output", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["oracle"]["is_drg"] is False and doc["graph"]["name"] == "hoffman"


def test_analyze_params_forms(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "complete_bipartite", "--params", "3,3")
    assert code == 0 and json.loads(out)["oracle"]["is_drg"]
    code, out, _ = run(capsys, "analyze", "--family", "circulant", "--params", "13", "1", "5")
    assert code == 0 and json.loads(out)["graph"]["n"] == 13


def test_analyze_stdin_graph6(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("C~\n"))
    code, out, _ = run(capsys, "analyze", "-i", "-")
    assert code == 0 and json.loads(out)["oracle"]["intersection_array"] == {"b": [3], "c": [1]}


def test_exit_codes(capsys, tmp_path):
    dis = tmp_path / "dis.el"
    dis.write_text("4\n0 1\n2 3\n")
    assert run(capsys, "analyze", "-i", str(dis))[0] == 3
    bad = tmp_path / "bad.g6"
    bad.write_text("A`\n")
    code, _, err = run(capsys, "analyze", "-i", str(bad))
    assert code == 2 and "padding" in err
    assert run(capsys, "analyze", "-i", str(tmp_path / "nope.el"))[0] == 2
    assert run(capsys, "analyze", "--family", "cycle", "--params", "2")[0] == 2
    assert run(capsys, "analyze", "--family", "complete", "--params", "1")[0] == 3


def test_oracle_gate_exit_code(capsys):
    code, out, err = run(capsys, "analyze", "--family", "hypercube", "--params", "3", "--tol-eq", "10")
    assert code == 4 and "oracle" in err
    assert json.loads(out)["flags"]


def test_tolerance_env(capsys, monkeypatch):
    monkeypatch.setenv("DRGCERT_TOL_EQ", "1e-5")
    _, out, _ = run(capsys, "analyze", "--family", "petersen")
    assert json.loads(out)["tolerances"]["eq_band"] == 1e-5
    _, out, _ = run(capsys, "analyze", "--family", "petersen", "--tol-eq", "1e-4")
    assert json.loads(out)["tolerances"]["eq_band"] == 1e-4


def test_generate(capsys):
    code, out, _ = run(capsys, "generate", "--family", "petersen")
    assert code == 0 and parse_graph6(out) == build_named("petersen")
    code, out, _ = run(capsys, "generate", "--family", "cycle", "--params", "5", "--format", "edgelist")
    assert out == format_edge_list(build_named("cycle", 5))


def batch_input(tmp_path, lines):
    p = tmp_path / "in.g6"
    p.write_text("".join(l + "\n" for l in lines))
    return str(p)


def test_batch_three_drgs(capsys, tmp_path):
    lines = [encode_graph6(build_named(*f)) for f in (("cycle", 5), ("complete", 4), ("petersen",))]
    code, out, _ = run(capsys, "batch", "-i", batch_input(tmp_path, lines))
    recs = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and len(recs) == 3
    assert all(r["report"]["oracle"]["is_drg"] for r in recs)


def test_batch_malformed_line(capsys, tmp_path):
    lines = ["Dhc", "A`", "C~"]
    code, out, _ = run(capsys, "batch", "-i", batch_input(tmp_path, lines))
    recs = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and [("error" in r) for r in recs] == [False, True, False]
    assert recs[1]["error"]["kind"] == "format" and recs[1]["line"] == 2


def test_batch_empty(capsys, tmp_path):
    code, out, _ = run(capsys, "batch", "-i", batch_input(tmp_path, []))
    assert code == 0 and out == ""


def test_batch_order_and_bytes_independent_of_jobs(capsys, tmp_path):
    graphs = [build_named("cycle", n) for n in range(3, 15)] + [build_named("hypercube", 4)]
    path = batch_input(tmp_path, [encode_graph6(G) for G in reversed(graphs)])
    _, serial, _ = run(capsys, "batch", "-i", path, "--jobs", "1")
    _, parallel, _ = run(capsys, "batch", "-i", path, "--jobs", "3")
    assert serial == parallel
    assert [json.loads(l)["line"] for l in serial.splitlines()] == list(range(1, len(graphs) + 1))


def test_selftest_missing_fixture(capsys, tmp_path):
    code, out, _ = run(capsys, "selftest", "--fixtures-dir", str(tmp_path))
    assert code == 1
    assert "fixture missing" in out


def test_selftest_absurd_tolerance(capsys):
    code, out, _ = run(capsys, "selftest", "--tol-eq", "10")
    assert code == 1
    assert "disagreements" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "drgcert", "generate", "--family", "complete", "--params", "4"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "C~"


def test_requires_a_command(capsys):
    with pytest.raises(SystemExit):
        main([])
