import io
import json
import subprocess
import sys

import pytest

from graphburn.cli import main
from graphburn.graph import load_graph

from conftest import read_lp, read_qubo


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_writes_graph_and_sidecar(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, _, _ = run(capsys, "gen", "er", "--n", "9", "--p", "5/n", "--seed", "4", "--out", str(out))
    assert code == 0
    meta = json.loads((tmp_path / "g.txt.json").read_text())
    G = load_graph(out)
    assert meta["n"] == G.n == 9 and meta["m"] == G.m and meta["family"] == "er"
    run(capsys, "gen", "er", "--n", "9", "--p", "5/n", "--seed", "4", "--out", str(tmp_path / "h.txt"))
    assert out.read_bytes() == (tmp_path / "h.txt").read_bytes()
    code, _, _ = run(capsys, "gen", "grid", "--rows", "4", "--cols", "5", "--out", str(tmp_path / "gr"))
    assert json.loads((tmp_path / "gr.json").read_text())["m"] == 31


def test_gen_usage_errors(tmp_path, capsys):
    assert run(capsys, "gen", "er", "--n", "9", "--out", str(tmp_path / "x"))[0] == 2
    assert run(capsys, "gen", "geo", "--out", str(tmp_path / "x"))[0] == 2


def test_emit_lp_and_manifest(tmp_path, capsys):
    out = tmp_path / "m.lp"
    code, stdout, _ = run(capsys, "emit", "cov-csp", "--gen", "path:9", "--g", "3", "--out", str(out))
    man = json.loads(stdout)
    assert code == 0 and man["variables"] == 27 and man["constraints"] == 12 and man["counts_match"]
    assert json.loads((tmp_path / "m.lp.json").read_text()) == man
    assert len(read_lp(out.read_text())[2]) == 12
    code, stdout, _ = run(capsys, "emit", "gbp-ilp", "--gen", "path:9", "--U", "5", "--out", str(out))
    assert json.loads(stdout)["variables"] == 45


def test_emit_qubo(tmp_path, capsys):
    out = tmp_path / "m.qubo"
    code, stdout, _ = run(capsys, "emit", "squbo", "--gen", "path:9", "--g", "3", "--out", str(out))
    assert code == 0 and json.loads(stdout)["dim"] == 45
    assert read_qubo(out.read_text())[0] == 45
    code, stdout, _ = run(capsys, "emit", "uqubo", "--gen", "path:9", "--g", "3", "--penalties", "uniform",
                          "--out", str(out))
    man = json.loads(stdout)
    assert man["dim"] == 27 and man["penalties"]["mode"] == "uniform"


def test_emit_missing_width(capsys):
    code, _, err = run(capsys, "emit", "cov-csp", "--gen", "path:9")
    assert code == 2 and "g" in err


@pytest.mark.parametrize(
    "method,extra",
    [("binary-search:cmcp", []), ("binary-search:cov-csp", []), ("binary-search:cov-ilp", []),
     ("binary-search:squbo", []), ("oracle", []), ("row-generation", []), ("row-generation", ["--U", "6"]),
     ("direct:gbp-ilp", ["--U", "5"])],
)
def test_solve_methods(capsys, method, extra):
    code, out, _ = run(capsys, "solve", "--gen", "path:9", "--method", method, *extra)
    d = json.loads(out)
    assert code == 0 and d["burning_number"] == 3 and d["status"] == "optimal"
    assert d["graph"]["n"] == 9


def test_solve_uqubo_is_upper_bound(capsys):
    code, out, _ = run(capsys, "solve", "--gen", "path:9", "--method", "binary-search:uqubo")
    assert code == 1 and json.loads(out)["status"] == "upper-bound-only"


def test_solve_sa_backend(capsys):
    code, out, _ = run(capsys, "solve", "--gen", "path:9", "--method", "binary-search:squbo",
                       "--backend", "sa", "--sa-seed", "2", "--sa-restarts", "4")
    d = json.loads(out)
    assert code == 1 and d["burning_number"] >= 3


def test_solve_errors(tmp_path, capsys):
    assert run(capsys, "solve", "--gen", "path:9", "--method", "direct:cov-csp")[0] == 2
    assert run(capsys, "solve", "--gen", "path:9", "--method", "bogus")[0] == 2
    assert run(capsys, "solve", "--gen", "path:30", "--method", "oracle")[0] == 3
    assert run(capsys, "solve", "--graph", str(tmp_path / "missing"))[0] == 2
    code, _, err = run(capsys, "solve", "--gen", "path:9", "--method", "direct:gbp-ilp", "--U", "5",
                       "--backend", "external", "--command", "no-such-binary {in} {out}")
    assert code == 4 and "could not run" in err


def test_solve_from_file_uses_labels(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text("10 20\n20 30\n30 40\n")
    code, out, _ = run(capsys, "solve", "--graph", str(f))
    d = json.loads(out)
    assert code == 0 and d["burning_number"] == 2 and set(d["witness"]) <= {10, 20, 30, 40}


def test_validate(tmp_path, capsys, monkeypatch):
    seq = tmp_path / "s"
    seq.write_text("1 5 3\n")
    code, out, _ = run(capsys, "validate", "--gen", "path:5", "--sequence", str(seq))
    assert code == 0 and out.startswith("valid")
    monkeypatch.setattr(sys, "stdin", io.StringIO("1,2\n"))
    js = tmp_path / "v.json"
    code, out, _ = run(capsys, "validate", "--gen", "path:5", "--sequence", "-", "--json", str(js))
    assert code == 1 and "uncovered: 3 4 5" in out
    assert json.loads(js.read_text())["uncovered"] == [3, 4, 5]
    seq.write_text("1 99\n")
    assert run(capsys, "validate", "--gen", "path:5", "--sequence", str(seq))[0] == 2


def test_bench_tsv_and_json(tmp_path, capsys):
    code, out, _ = run(capsys, "bench", "--n", "6", "--params", "5/n", "--reps", "3",
                       "--methods", "uqubo-guided,cmcp")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3 and lines[2].startswith("5/n\t6\t")
    js = tmp_path / "b.json"
    run(capsys, "bench", "--n", "6", "--params", "5/n", "--reps", "3", "--methods", "cmcp",
        "--format", "json", "--out", str(js))
    data = json.loads(js.read_text())
    assert len(data["instances"]) == 3 and data["cells"][0]["rates"] == {"cmcp": 100.0}


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "graphburn", "solve", "--gen", "cycle:10"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["burning_number"] == 4
