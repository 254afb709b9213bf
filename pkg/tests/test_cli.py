import json
import shutil
import subprocess
from importlib import resources

import jsonschema
import pytest

from digsplit.cli import main
from digsplit.pairing import random_pairing


def _schema(name):
    return json.loads(resources.files("digsplit").joinpath("schemas", name).read_text())


RESULT = _schema("result-v1.json")
DIAG = _schema("diagnostic-v1.json")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def rot(tmp_path, capsys):
    path = tmp_path / "rot.txt"
    assert run(capsys, "generate", "--family", "rotational", "--n", 201, "--out", path)[0] == 0
    return path


@pytest.fixture
def two_cycles(tmp_path):
    path = tmp_path / "cc.txt"
    path.write_text("6 6\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n")
    return path


def test_generate_is_byte_reproducible(capsys):
    a = run(capsys, "generate", "--family", "tournament", "--n", 9, "--seed", 4)[1]
    b = run(capsys, "generate", "--family", "tournament", "--n", 9, "--seed", 4)[1]
    assert a == b and a.startswith("9 36\n")
    k = run(capsys, "generate", "--family", "kpartite", "--parts", "2,3", "--seed", 7)[1]
    assert k.endswith("part 0: 0 1\npart 1: 2 3 4\n")


@pytest.mark.parametrize("method, extra", [
    ("pairing", ["--eps", "0.2"]),
    ("lll", ["--eps", "0.2"]),
    ("peel", ["--eps", "0.2"]),
    ("pairing", ["--k", "20"]),
])
def test_split_then_verify(tmp_path, capsys, rot, method, extra):
    out = tmp_path / "res.json"
    code, _, _ = run(capsys, "split", "--method", method, "--in", rot, "--seed", 3,
                     "--out", out, *extra)
    assert code == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, RESULT)
    assert doc["verified"] and doc["method"] == method
    code, text, _ = run(capsys, "verify", "--split", out, "--in", rot)
    assert code == 0 and json.loads(text)["valid"]


def test_split_output_is_byte_reproducible(capsys, rot):
    a = run(capsys, "split", "--method", "pairing", "--eps", "0.2", "--in", rot, "--seed", 9)[1]
    b = run(capsys, "split", "--method", "pairing", "--eps", "0.2", "--in", rot, "--seed", 9,
            "--jobs", 3)[1]
    assert a == b


def test_peel_st(tmp_path, capsys, two_cycles):
    out = tmp_path / "res.json"
    code, _, _ = run(capsys, "split", "--method", "peel", "--s", 1, "--t", 1, "--in", two_cycles,
                     "--out", out)
    doc = json.loads(out.read_text())
    assert code == 0 and doc["A"] == [3, 4, 5]
    jsonschema.validate(doc, RESULT)
    code, text, _ = run(capsys, "verify", "--split", out, "--in", two_cycles, "--minimal")
    assert code == 0 and json.loads(text)["checks"]["A_is_minimal_core"]


def test_tampered_split_fails_verification(tmp_path, capsys, two_cycles):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "digsplit/result-v1", "method": "peel", "seed": None,
                               "params": {"n": 6, "s": 1, "t": 1}, "A": [0, 1, 3],
                               "B": [2, 4, 5], "stats": {}, "verified": True}))
    code, text, _ = run(capsys, "verify", "--split", bad, "--in", two_cycles)
    assert code == 2 and not json.loads(text)["valid"]


def test_structured_failure(tmp_path, capsys):
    path = tmp_path / "c3.txt"
    path.write_text("3 3\n0 1\n1 2\n2 0\n")
    code, out, err = run(capsys, "split", "--method", "pairing", "--eps", "0.4", "--in", path,
                         "--max-trials", 3)
    assert code == 2 and out == ""
    diag = json.loads(err.strip().splitlines()[-1])
    jsonschema.validate(diag, DIAG)
    assert diag["details"]["bad_history"] == [3, 3, 3]


@pytest.mark.parametrize("argv", [
    ["split", "--method", "pairing"],
    ["split", "--method", "nope"],
    ["bound"],
    ["prob", "--profile", "1,2"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1
    jsonschema.validate(json.loads(err.strip().splitlines()[-1]), DIAG)


def test_malformed_input(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("3 1\n0 3\n")
    code, _, err = run(capsys, "split", "--method", "peel", "--s", 1, "--t", 1, "--in", path)
    assert code == 1 and "line 2" in err


def test_bound(capsys):
    assert run(capsys, "bound", "--delta0", "0.2")[1] == "512\n"
    assert run(capsys, "bound", "--lemma2", 1, 2)[1] == "4\n"
    assert run(capsys, "bound", "--lemma2", 2, 2)[1] == "81/8\n"
    assert run(capsys, "bound", "--delta0-lll", "0.25")[1] == "205\n"
    doc = json.loads(run(capsys, "bound", "--delta0", "0.2", "--json")[1])
    assert doc == {"value": 512, "i0": 10}


def test_prob(tmp_path, capsys, rot):
    doc = json.loads(run(capsys, "prob", "--profile", "1,3,plus", "--t", 2)[1])
    assert doc["prob_too_few"] == "1/4" and doc["prob_too_many"] == "0"
    pfile = tmp_path / "p.json"
    pfile.write_text(json.dumps(random_pairing(201, seed=1).to_json()))
    code, text, _ = run(capsys, "prob", "--in", rot, "--vertex", 0, "--pairing", pfile,
                        "--eps", "0.2")
    doc = json.loads(text)
    assert code == 0 and doc["t"] == 30 and doc["profile"]["dplus"] == 100


def test_verify_lll(tmp_path, capsys, rot):
    code, text, _ = run(capsys, "verify", "--in", rot, "--lll", "--eps", "0.25")
    doc = json.loads(text)
    assert code == 2 and not doc["checks"]["lll_passes"]  # d+ = 100 is far below 205


def test_oracle_commands(tmp_path, capsys, two_cycles):
    code, text, _ = run(capsys, "oracle", "--exists-split", "--in", two_cycles, "--s", 1, "--t", 1)
    assert code == 0 and json.loads(text)["A"] == [0, 1, 2]
    code, text, _ = run(capsys, "oracle", "--scan-minimal", "--max-part", 3, "--s", 1)
    doc = json.loads(text)
    assert doc["count"] == 2 and doc["max_vertices"] == 4
    pfile = tmp_path / "p.json"
    pfile.write_text(json.dumps({"pairs": [[0, 3], [1, 4], [2, 5]], "singleton": None}))
    code, text, _ = run(capsys, "oracle", "--xv-dist", "--in", two_cycles, "--vertex", 0,
                        "--pairing", pfile)
    assert json.loads(text)["distribution"] == {"0": "1/2", "1": "1/2"}


def test_sweep_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--family", "tournament", "--eps", "0.2,0.3", "--n", "21,41",
                     "--trials", 50, "--out", out)
    lines = out.read_text().splitlines()
    assert code == 0 and len(lines) == 5
    assert lines[0] == "epsilon,n,seed,trials,mean_bad,stderr_bad,exact_EX,analytic_bound,success_rate"
    assert lines[1].startswith("0.2,21,")


@pytest.mark.skipif(shutil.which("digsplit") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["digsplit", "bound", "--delta0", "0.4"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "128\n"
