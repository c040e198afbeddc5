import json
import os
import subprocess
import sys

import pytest

from fusionkit.cli import main


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("FUSIONKIT_CACHE", str(d))
    return d


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_analyze_a6(capsys):
    d = run_json(capsys, "analyze", "--group", "alt:6", "--p", "2")
    assert d["schema"] == 1
    assert d["reduced"] is True
    assert len(d["essentials"]) == 2
    assert d["order_S"] == "8" and d["input"]["order"] == "360"
    assert d["saturated"] is True
    assert "timing" not in d


def test_analyze_d8(capsys):
    d = run_json(capsys, "analyze", "--group", "dihedral:3", "--p", "2")
    assert d["reduced"] is False
    assert d["O_p"]["order"] == "8"


def test_analyze_sigma4(capsys):
    d = run_json(capsys, "analyze", "--group", "sym:4", "--p", "2")
    assert d["constrained"] is True
    assert d["reduction"]["trivial"] is True


def test_reduce(capsys):
    d = run_json(capsys, "reduce", "--group", "sym:6", "--p", "2")
    assert d["trace"]["result"]["order_S"] == "8"
    d2 = run_json(capsys, "reduce", "--group", "sym:6", "--p", "2", "--opprime-first")
    assert d2["trace"]["result"]["order_S"] == "8"


def test_compare(capsys):
    d = run_json(capsys, "compare", "--a", "alt:6", "--b", "psl2:7", "--p", "2")
    assert d["isomorphic"] is True and d["witness"]
    d = run_json(capsys, "compare", "--a", "alt:6", "--b", "dihedral:3", "--p", "2")
    assert d["isomorphic"] is False and "witness" not in d


def test_linking(capsys):
    d = run_json(capsys, "linking", "--group", "alt:6", "--p", "2")
    assert (d["ker_mu_lower"], d["ker_mu_upper"], d["kappa"]) == ("2", "2", "isomorphism")


def test_catalog(capsys):
    d = run_json(capsys, "catalog")
    sels = {e["selector"]: e for e in d["entries"]}
    assert sels["m11"]["order"] == "7920"
    assert sels["alt:9"]["order_S"] == "81"


def test_input_errors(capsys):
    for argv in (["analyze", "--group", "nope:1", "--p", "2"], ["analyze"], ["frobnicate"],
                 ["analyze", "--group", "alt:6", "--p", "4"],
                 ["analyze", "--group", "file:/does/not/exist", "--p", "2"]):
        code, out, err = run(capsys, *argv)
        assert code == 1, argv
        assert out == ""
        e = json.loads(err.strip().splitlines()[-1])
        assert e["schema"] == 1 and e["error"]["exit_code"] == 1


def test_capacity_errors(capsys):
    code, _, err = run(capsys, "analyze", "--group", "alt:8", "--p", "2", "--max-s-order", "32")
    assert code == 2
    assert json.loads(err)["error"]["kind"] == "capacity"
    code, _, _ = run(capsys, "linking", "--group", "alt:8", "--p", "2")
    assert code == 2


def test_warm_cache_is_byte_identical(capsys, cache_dir):
    argv = ["analyze", "--group", "psl2:7", "--p", "2", "--linking"]
    cold = run(capsys, *argv)
    assert any(cache_dir.rglob("*.json"))
    warm = run(capsys, *argv)
    nocache = run(capsys, *argv, "--no-cache")
    assert cold == warm == nocache


def test_caps_change_cache_key(capsys, cache_dir):
    run(capsys, "analyze", "--group", "sym:4", "--p", "2")
    run(capsys, "analyze", "--group", "sym:4", "--p", "2", "--max-morphisms", "999999")
    assert len(list(cache_dir.rglob("*.json"))) == 2


def test_corrupt_cache_entry_is_recomputed(capsys, cache_dir):
    argv = ["analyze", "--group", "sym:4", "--p", "2"]
    cold = run(capsys, *argv)
    for f in cache_dir.rglob("*.json"):
        f.write_text("{not json")
    assert run(capsys, *argv) == cold


def test_out_file_and_timing(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "analyze", "--group", "alt:5", "--p", "2", "--out", str(target),
                       "--timing")
    assert code == 0 and out == ""
    d = json.loads(target.read_text())
    assert d["timing"]["seconds"] >= 0
    assert json.loads(json.dumps(d)) == d


def test_file_selector(capsys, tmp_path):
    f = tmp_path / "a6.txt"
    f.write_text("degree: 6\np: 2\ngenerators:\n(1 2 3 4 5)\n(4 5 6)\n")
    d = run_json(capsys, "analyze", "--group", f"file:{f}")
    assert d["p"] == 2 and d["reduced"] is True


def test_console_entry_point(tmp_path):
    env = dict(os.environ, FUSIONKIT_CACHE=str(tmp_path / "c"))
    r = subprocess.run([sys.executable, "-m", "fusionkit.cli", "analyze", "--group", "bad"],
                       env=env, capture_output=True, text=True)
    assert r.returncode == 1
    assert json.loads(r.stderr)["error"]["kind"] == "input"
