"""End-to-end tests that run the installed command in a subprocess."""

import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from grassmann_isd.cli import parse_syndrome
from grassmann_isd.codes import LinearCode
from grassmann_isd.errors import InvalidArgument
from grassmann_isd.field import GF2, GF2m

GOLDEN = Path(__file__).parent / "golden"
EXE = shutil.which("grassmann-isd")
BASE = [EXE] if EXE else [sys.executable, "-m", "grassmann_isd"]


def run(*args, cwd=None):
    env = dict(os.environ, COLUMNS="100", PYTHONHASHSEED="0")
    return subprocess.run(BASE + [str(a) for a in args], capture_output=True, text=True, env=env, cwd=cwd)


def ok_json(*args, **kw):
    res = run(*args, **kw)
    assert res.returncode == 0, res.stderr + res.stdout
    return json.loads(res.stdout)


@pytest.fixture(scope="module")
def bundles(tmp_path_factory):
    d = tmp_path_factory.mktemp("codes")
    paths = {}
    for name, args in {
        "random": ["--family", "random", "--n", 10, "--k", 4, "--seed", 3],
        "gr24": ["--family", "plabic", "--golden", "gr24"],
        "ldpc": ["--family", "ldpc", "--n", 12, "--col-weight", 2, "--row-weight", 4, "--seed", 1],
        "gf4": ["--family", "plabic", "--n", 10, "--k", 4, "--m", 2, "--seed", 2],
    }.items():
        p = d / f"{name}.code.json"
        res = run("code", "build", *args, "--out", p)
        assert res.returncode == 0, res.stderr + res.stdout
        paths[name] = p
    return paths


@pytest.mark.parametrize("name", sorted(p.stem for p in GOLDEN.glob("help_*.txt")))
def test_help_is_golden(name):
    words = name[len("help_"):].split("_")
    args = [] if words == ["root"] else words
    res = run(*args, "--help")
    assert res.returncode == 0
    assert res.stdout == (GOLDEN / f"{name}.txt").read_text()


def test_provenance_header_on_stderr():
    res = run("tables", "--level", "128")
    assert res.returncode == 0 and res.stdout.strip() == "131072"
    assert res.stderr.startswith("# grassmann-isd 0.1.0 seed=0 config=")


def test_tables():
    t = ok_json("tables", "--table", "1")
    assert t == {"128": 131072, "256": 1048576, "512": 8388608, "1024": 67108864}
    rows = ok_json("tables", "--table", "2")
    assert rows[-1]["n"] == 110 and rows[-1]["w"] == 12
    csv = run("tables", "--table", "1", "--format", "csv").stdout.splitlines()
    assert csv[0] == "level,operations" and csv[1] == "128,131072"


def test_bounds():
    res = ok_json("bounds", "--bound", "gaussian_decomposition_cost", "--param", "n=10", "--param", "k=4")
    assert res["value"] == "48" and res["exact"]
    assert "simple_code_failure" in ok_json("bounds", "--list")
    err = run("bounds", "--bound", "gaussian_decomposition_cost", "--param", "n=10")
    assert err.returncode == 1 and json.loads(err.stdout)["error"]["code"]


def test_graph(tmp_path):
    out = ok_json("graph", "--golden", "gr24", "--plucker", "--text")
    assert out["tanner"] == [[1, 0, 0, 0], [0, 1, 1, 1]]
    assert out["plucker"]["1,2"] == "1"
    saved = tmp_path / "g.plabic"
    ok_json("graph", "--n", 6, "--k", 3, "--seed", 4, "--save", saved)
    again = ok_json("graph", "--file", saved)
    assert again["n"] == 6 and again["k"] == 3
    assert run("graph", "--file", tmp_path / "missing.plabic").returncode == 1
    assert run("graph").returncode == 1


def test_code_build_inspect_oracle(bundles):
    code = LinearCode.load(bundles["random"])
    assert (code.n, code.k) == (10, 4)
    info = ok_json("code", "inspect", "--code", bundles["gr24"])
    assert info["n"] == 4 and info["metric"] == "grassmann"
    orc = ok_json("code", "oracle", "--code", bundles["gr24"])
    assert orc["min_weight"] == 1
    for fam in (["--family", "moore", "--n", 6, "--k", 2, "--m", 4], ["--family", "lift", "--n", 5, "--k", 2],
                ["--family", "preset"]):
        assert ok_json("code", "build", *fam)["n"] in (5, 6, 110)
    missing = run("code", "build", "--family", "random", "--n", 6)
    assert missing.returncode == 1 and "--k" in missing.stdout


def test_oracle(bundles):
    summary = ok_json("oracle", "--code", bundles["random"])
    assert summary["syndromes"] == 64
    hit = ok_json("oracle", "--code", bundles["random"], "--syndrome", "000000")
    assert hit["solvable"] and hit["weight"] == 0
    assert run("oracle", "--code", bundles["gf4"]).returncode == 1


@pytest.mark.parametrize("algo", ["prange", "birthday", "plucker"])
def test_decode(bundles, algo):
    code = LinearCode.load(bundles["random"])
    e = np.zeros(10, dtype=np.int64)
    e[[2, 7]] = 1
    s = "".join(str(v) for v in (code.parity_check.data @ e) % 2)
    args = ["decode", "--code", bundles["random"], "--syndrome", s, "--w", 2, "--algo", algo, "--T", 10000]
    if algo == "birthday":
        args += ["--p", 1, "--l", 2]
    out = ok_json(*args)
    assert out["success"] and out["weight_found"] <= 2
    x = np.array(out["error_vector"])
    assert np.array_equal((code.parity_check.data @ x) % 2, (code.parity_check.data @ e) % 2)


def test_decode_gf4(bundles):
    out = ok_json("decode", "--code", bundles["gf4"], "--syndrome", "0,0,0,0,0,0", "--w", 1)
    assert out["success"] and out["error_vector"] == [0] * 10


def test_usage_and_domain_errors(bundles):
    assert run("decode").returncode == 2
    assert run("tables", "--level", "nope").returncode == 2
    assert run("frobnicate").returncode == 2
    bad = run("decode", "--code", bundles["random"], "--syndrome", "12", "--w", 2)
    assert bad.returncode == 1
    assert set(json.loads(bad.stdout)["error"]) == {"code", "message", "context"}
    assert run("decode", "--code", "/nonexistent.json", "--syndrome", "0", "--w", 1).returncode == 1
    assert run("tables", "--level", "100").returncode == 1


def test_global_options_before_and_after(tmp_path):
    a = run("--seed", 5, "graph", "--n", 6, "--k", 2)
    b = run("graph", "--n", 6, "--k", 2, "--seed", 5)
    assert a.returncode == b.returncode == 0 and a.stdout == b.stdout
    out = tmp_path / "t.json"
    assert run("tables", "--out", out).stdout == ""
    assert json.loads(out.read_text())["table1"]["128"] == 131072


def test_bench_cli(tmp_path):
    spec = {"code_specs": [{"name": "grassmann", "family": "plabic", "n": 12, "k": 6},
                           {"name": "ldpc", "family": "ldpc", "n": 12, "col_weight": 2, "row_weight": 4}],
            "sigma_grid": [0.5], "trials_per_point": 10, "T": 100}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    rep = ok_json("bench", "failure", "--spec", path, "--seed", 2, "--threads", 1)
    assert rep["seed"] == 2 and len(rep["records"]) == 2
    csv = run("bench", "failure", "--spec", json.dumps(spec), "--format", "csv", "--threads", 1)
    assert csv.stdout.splitlines()[0] == "series,x,value,lo95,hi95,trials"
    assert "wall time" in csv.stderr
    rc = ok_json("bench", "rowcost", "--spec", json.dumps({"lengths": [12], "trials_per_point": 3, "T": 50}),
                 "--threads", 1)
    assert {r["series"] for r in rc["records"]} == {"grassmann", "ldpc"}
    assert run("bench", "failure").returncode == 1
    assert run("bench", "failure", "--spec", "{bad").returncode == 1


def test_parse_syndrome():
    assert parse_syndrome("101", 3, GF2).tolist() == [1, 0, 1]
    assert parse_syndrome("1, 0, 1", 3, GF2).tolist() == [1, 0, 1]
    assert parse_syndrome("a 3", 2, GF2m(4)).tolist() == [10, 3]
    with pytest.raises(InvalidArgument):
        parse_syndrome("12", 3, GF2)
    with pytest.raises(InvalidArgument):
        parse_syndrome("zz", 1, GF2)
    with pytest.raises(InvalidArgument):
        parse_syndrome("2", 1, GF2)
