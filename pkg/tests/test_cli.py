import json
import subprocess
import sys

import pytest

from hyperquasi import gen_coregular_sum, read_hypergraph, write_hypergraph
from hyperquasi.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_partitions(capsys):
    code, out = _run(capsys, "partitions", "--k", "4")
    assert code == 0
    assert out.out.split() == ["1+1+1+1", "1+1+2", "1+3", "2+2"]
    code, out = _run(capsys, "partitions", "--k", "3", "--json")
    assert json.loads(out.out) == ["1+1+1", "1+2"]


def test_gen_coregular(tmp_path, capsys):
    path = tmp_path / "h.txt"
    assert _run(capsys, "gen", "coregular", "--k", "3", "--n", "5", "--d", "2", "-o", str(path))[0] == 0
    assert read_hypergraph(path) == gen_coregular_sum(3, 5, {0, 1})
    code, out = _run(capsys, "gen", "coregular", "--k", "2", "--n", "4", "--residues", "0,2")
    assert code == 0 and out.out.startswith("k=2 n=4 loops=1")


def test_gen_random(tmp_path, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    for p in (a, b):
        _run(capsys, "gen", "random", "--k", "3", "--n", "7", "--p", "0.4", "--seed", "2", "-o", str(p))
    assert a.read_text() == b.read_text()


def test_check_exit_codes(tmp_path, capsys):
    path = tmp_path / "h.txt"
    write_hypergraph(gen_coregular_sum(3, 5, {0, 1}), path)
    report = tmp_path / "r.json"
    code, _ = _run(capsys, "check", "--input", str(path), "--pi", "1+2", "--p", "0.4",
                   "--eps", "0.15", "--props", "eig,expand", "-o", str(report))
    data = json.loads(report.read_text())
    assert data["reports"][0]["pi"] == "1+2"
    assert code == (0 if data["passed"] else 1)
    # a far-off target density must fail
    code, out = _run(capsys, "check", "--input", str(path), "--pi", "1+2", "--p", "0.95", "--props", "eig")
    assert code == 1 and json.loads(out.out)["passed"] is False


def test_check_deterministic(capsys):
    argv = ["check", "--k", "2", "--n", "10", "--seed", "4", "--samples", "8"]
    _, a = _run(capsys, *argv)
    _, b = _run(capsys, *argv)
    assert a.out == b.out


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("k=3 n=4 loops=0\n0 1 2\n0 1 9\n")
    code, out = _run(capsys, "check", "--input", str(bad))
    assert code == 2 and "line 3" in out.err
    assert _run(capsys, "check", "--k", "3", "--n", "5", "--props", "bogus")[0] == 2
    assert _run(capsys, "check", "--k", "3", "--n", "5", "--pi", "1+1")[0] == 2
    assert _run(capsys, "check", "--input", str(tmp_path / "missing.txt"))[0] == 2


def test_cap_exceeded(capsys):
    code, out = _run(capsys, "spectra", "--k", "3", "--n", "6", "--pi", "1+1+1", "--cap", "30")
    assert code == 3 and "36" in out.err and "HYPERQUASI_CAP" in out.err


def test_spectra_and_count(capsys):
    code, out = _run(capsys, "spectra", "--k", "3", "--n", "5", "--d", "2", "--pi", "1+2", "--restarts", "4")
    rep = json.loads(out.out)
    assert code == 0
    assert rep["lambda1_exact"] == pytest.approx(2 * 5 ** 0.5)
    code, out = _run(capsys, "count", "--k", "2", "--n", "3", "--d", "3", "--pi", "1+1", "--ell", "2",
                     "--homomorphisms")
    circ = json.loads(out.out)["circuits"][0]
    assert code == 0
    # complete graph with loops on 3 vertices: every map counts, 3^4 = 81
    assert circ["count"] == circ["homomorphisms"]["count"] == 81


def test_templates_export(tmp_path, capsys):
    prefix = tmp_path / "c12"
    code, _ = _run(capsys, "templates", "export", "--pi", "1+2", "--kind", "cycle", "-o", str(prefix))
    assert code == 0
    f = read_hypergraph(tmp_path / "c12.txt")
    assert (f.n, f.num_edges) == (6, 4)
    assert json.loads((tmp_path / "c12.json").read_text())["pi"] == [1, 2]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "hyperquasi", "partitions", "--k", "3"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["1+1+1", "1+2"]


def test_timings_opt_in(capsys):
    _, out = _run(capsys, "check", "--k", "2", "--n", "8", "--samples", "4", "--props", "disc,eig")
    assert "timings" not in json.loads(out.out)["reports"][0]
    _, out = _run(capsys, "check", "--k", "2", "--n", "8", "--samples", "4", "--props", "disc,eig", "--timings")
    assert set(json.loads(out.out)["reports"][0]["timings"]) == {"disc", "eig"}
    _, out = _run(capsys, "spectra", "--k", "2", "--n", "6", "--timings")
    assert set(json.loads(out.out)["timings"]) == {"lambda1", "lambda2"}
