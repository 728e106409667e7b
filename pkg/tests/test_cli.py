from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from ekr.cli import (EXIT_FAILS, EXIT_HOLDS, EXIT_IO, EXIT_NOT_COMPUTED, EXIT_REPLAY, EXIT_USAGE,
                     RunConfig, UsageError, main)

ETA_100 = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]


def spec_file(tmp_path, name, params=None, fname="group.json"):
    path = tmp_path / fname
    path.write_text(json.dumps({"kind": "named", "name": name, "params": params or {}}))
    return str(path)


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out.strip() else None
    return code, report, out.err


def test_heisenberg_strong_fails(tmp_path, capsys):
    g = spec_file(tmp_path, "heisenberg", {"p": 3})
    code, rep, err = run(["--group", g, "--subgroup-gens", json.dumps([ETA_100]),
                          "--mode", "strong"], capsys)
    assert code == EXIT_FAILS
    assert rep["weak"] is True and rep["strong"] == "false"
    assert rep["witness"]["kind"] == "non_canonical_max_clique" and len(rep["witness"]["elements"]) == 3
    assert "max_clique=3" in err


def test_heisenberg_weak_mode(tmp_path, capsys):
    g = spec_file(tmp_path, "heisenberg", {"p": 3})
    sub = tmp_path / "sub.json"
    sub.write_text(json.dumps([ETA_100]))
    code, rep, _ = run(["--group", g, "--subgroup", sub, "--mode", "weak"], capsys)
    assert code == EXIT_HOLDS and rep["strong"] == "not_computed" and rep["witness"] is None


def test_sl2_unipotent_strong_holds(tmp_path, capsys):
    g = spec_file(tmp_path, "SL", {"n": 2, "q": 3})
    code, rep, _ = run(["--group", g, "--subgroup-gens", "[[[1,1],[0,1]]]"], capsys)
    assert code == EXIT_HOLDS and rep["strong"] == "true" and rep["index"] == 8


def test_raw_matrix_group_spec(tmp_path, capsys):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"kind": "matrix", "field": {"p": 3, "k": 1}, "dim": 2,
                             "projective": False, "determinant_one": True,
                             "generators": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]}))
    code, rep, _ = run(["--group", g, "--subgroup-gens", "[[[0,2],[1,0]]]", "--mode", "weak"],
                       capsys)
    assert code == EXIT_FAILS and rep["max_clique"] > 4


@pytest.mark.parametrize("name,params,code,strong", [
    ("quaternion8", {}, EXIT_HOLDS, "true"),
    ("dihedral", {"n": 4}, EXIT_HOLDS, "true"),
    ("heisenberg", {"p": 3}, EXIT_FAILS, "false"),
    ("symmetric", {"n": 3}, None, None),
])
def test_survey(tmp_path, capsys, name, params, code, strong):
    g = spec_file(tmp_path, name, params)
    got, rep, err = run(["--group", g, "--mode", "survey", "--threads", "2"], capsys)
    assert rep["weak"] is True
    assert all(row["report"]["weak"] for row in rep["subgroup_classes"])
    if code is not None:
        assert got == code and rep["strong"] == strong
    assert f"group {rep['group']}" in err


def test_survey_order_cap(tmp_path, capsys):
    g = spec_file(tmp_path, "PSL", {"n": 3, "q": 3})
    code, rep, err = run(["--group", g, "--mode", "survey"], capsys)
    assert code == EXIT_NOT_COMPUTED and rep is None and "not computed" in err


@pytest.mark.parametrize("name,params,check", [
    ("suzuki", ["n=1"], lambda r: r["claimed_sizes"][:2] == [64, 16]),
    ("psl2", ["q=5"], lambda r: r["notes"]["case"] == 2),
    ("pgl-independent", ["n=3", "q=2"], lambda r: len(r["elements"]) == 7),
])
def test_witness_mode(capsys, name, params, check):
    code, rep, _ = run(["--mode", "witness", "--witness", name, "--params", *params], capsys)
    assert code == EXIT_HOLDS and all(rep["replay"].values()) and check(rep)


def test_certificate_replay_and_tamper(tmp_path, capsys):
    out = tmp_path / "cert.json"
    code, _, _ = run(["--mode", "witness", "--witness", "heisenberg", "--params", "p=3",
                      "--output", out], capsys)
    assert code == EXIT_HOLDS and out.exists()
    code, rep, _ = run(["--mode", "witness", "--certificate", out], capsys)
    assert code == EXIT_HOLDS and rep["replay"]["not_coset_of_conjugate"]
    cert = json.loads(out.read_text())
    cert.pop("replay")
    cert["claimed_sizes"] = [4, 3, 9]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(cert))
    code, rep, err = run(["--mode", "witness", "--certificate", bad], capsys)
    assert code == EXIT_REPLAY and rep["replay"]["sizes"] is False


def test_usage_and_io_errors(tmp_path, capsys):
    g = spec_file(tmp_path, "heisenberg", {"p": 3})
    assert run(["--mode", "witness", "--witness", "ree"], capsys)[0] == EXIT_USAGE
    assert run(["--mode", "sideways"], capsys)[0] == EXIT_USAGE
    assert run(["--mode", "strong", "--group", g], capsys)[0] == EXIT_USAGE
    assert run(["--group", g, "--subgroup-gens", "{}"], capsys)[0] == EXIT_USAGE
    assert run(["--group", g, "--subgroup-gens", "[[[2,0,0],[0,1,0],[0,0,1]]]"], capsys)[0] == EXIT_USAGE
    assert run(["--group", g, "--subgroup-gens", "[]", "--threads", "0"], capsys)[0] == EXIT_USAGE
    assert run(["--mode", "witness", "--witness", "psl2", "--params", "q"], capsys)[0] == EXIT_USAGE
    assert run(["--mode", "witness", "--witness", "psl2", "--params", "r=3"], capsys)[0] == EXIT_USAGE
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(["--group", broken, "--subgroup-gens", "[]"], capsys)[0] == EXIT_USAGE
    assert run(["--group", tmp_path / "missing.json", "--subgroup-gens", "[]"], capsys)[0] == EXIT_IO
    code = run(["--group", g, "--subgroup-gens", "[]", "--output", tmp_path / "no" / "dir.json"],
               capsys)[0]
    assert code == EXIT_IO


def test_caps_give_not_computed(tmp_path, capsys):
    g = spec_file(tmp_path, "heisenberg", {"p": 3})
    assert run(["--group", g, "--subgroup-gens", "[]", "--max-order", "10"], capsys)[0] == EXIT_NOT_COMPUTED
    code, _, err = run(["--group", g, "--subgroup-gens", json.dumps([ETA_100]),
                        "--max-clique-vertices", "5"], capsys)
    assert code == EXIT_NOT_COMPUTED and "cap" in err
    code, rep, _ = run(["--group", g, "--subgroup-gens", json.dumps([ETA_100]),
                        "--max-extremal", "2"], capsys)
    assert code == EXIT_NOT_COMPUTED and rep["strong"] == "not_computed" and rep["diagnostic"]


def test_reports_identical_across_threads_and_runs(tmp_path):
    g = spec_file(tmp_path, "SL", {"n": 2, "q": 5})
    outs = []
    for threads in (1, 4, 1):
        out = tmp_path / f"r{len(outs)}.json"
        main(["--group", g, "--subgroup-gens", "[[[0,4],[1,0]]]", "--threads", str(threads),
              "--output", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    g = spec_file(tmp_path, "dihedral", {"n": 6})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["--group", g, "--mode", "survey", "--threads", "1", "--output", str(a)])
    main(["--group", g, "--mode", "survey", "--threads", "4", "--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_cache_dir_is_used(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("EKR_CACHE_DIR", str(tmp_path / "cache"))
    g = spec_file(tmp_path, "GL", {"n": 2, "q": 3})
    run(["--group", g, "--subgroup-gens", "[[[1,1],[0,1]]]"], capsys)
    assert list((tmp_path / "cache").glob("group-*.npz"))


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(mode="strong", threads=0)
    with pytest.raises(UsageError):
        RunConfig(mode="strong", max_extremal=0)
    with pytest.raises(UsageError):
        RunConfig(mode="bogus")


def test_console_script(tmp_path):
    exe = shutil.which("ekr")
    cmd = [exe] if exe else [sys.executable, "-m", "ekr.cli"]
    res = subprocess.run(cmd + ["--mode", "witness", "--witness", "psl2", "--params", "q=3"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert json.loads(res.stdout)["notes"]["case"] == 1
