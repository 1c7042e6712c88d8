import json
import subprocess
import sys

import pytest

from uff.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def load(path):
    return json.loads(path.read_text())


def test_uob_gen_then_validate(tmp_path):
    u = tmp_path / "u.json"
    assert run("uob", "gen", "--n", 4, "--seed", 7, "--out", u) == 0
    rep = tmp_path / "rep.json"
    assert run("uob", "validate", u, "--out", rep) == 0
    r = load(rep)
    assert r["pass"] and r["count"] == 16 and r["format"] == 1


@pytest.mark.parametrize("gen, tail", [("product", ["--tail", 3]), ("generic", []), ("split", ["--tail", 2, 2])])
def test_uob_generators(tmp_path, gen, tail):
    u = tmp_path / "u.json"
    assert run("uob", "gen", "--n", 2, "--generator", gen, *tail, "--seed", 1, "--out", u) == 0
    assert run("uob", "validate", u, "--out", tmp_path / "r.json") == 0


def test_validate_detects_broken_basis(tmp_path):
    u = tmp_path / "u.json"
    run("uob", "gen", "--n", 2, "--seed", 1, "--out", u)
    doc = load(u)
    doc["states"][1] = doc["states"][0]
    u.write_text(json.dumps(doc))
    assert run("uob", "validate", u, "--out", tmp_path / "r.json") == 1


def test_frame_verify_example(tmp_path):
    fam = tmp_path / "fam.json"
    assert run("frame", "family", "--n", 5, "--seed", 11, "--out", fam) == 0
    rep = tmp_path / "rep.json"
    assert run("frame", "verify", "--family", fam, "--trials", 200, "--n", 5, "--seed", 3, "--out", rep) == 0
    r = load(rep)
    assert r["max_abs_residual"] <= 1e-9 and r["trials"] == 200
    assert r["config"]["tolerance"] == 1e-9 and r["tolerance"] == 1e-9


def test_frame_eval(tmp_path):
    fam, u, rep = tmp_path / "fam.json", tmp_path / "u.json", tmp_path / "rep.json"
    run("frame", "family", "--n", 3, "--seed", 2, "--out", fam)
    run("uob", "gen", "--n", 3, "--seed", 4, "--out", u)
    assert run("frame", "eval", "--family", fam, u, "--out", rep) == 0
    r = load(rep)
    assert len(r["values"]) == 8 and abs(r["sum"] - r["c"]) <= 1e-12


def test_scan_exit_codes(tmp_path):
    fam = tmp_path / "fam.json"
    run("frame", "family", "--n", 2, "--kind", "uniform", "--out", fam)
    assert run("frame", "scan-nonneg", "--family", fam, "--trials", 10, "--out", tmp_path / "a.json") == 0
    bad = load(fam)
    for e in bad["families"]:
        e["params"]["value"] = 0.9 if e["mask"] == [] else 0.2
    fam.write_text(json.dumps(bad))
    assert run("frame", "scan-nonneg", "--family", fam, "--trials", 10, "--out", tmp_path / "b.json") == 1
    assert load(tmp_path / "b.json")["min_value"] == pytest.approx(-0.7)


def test_recover_phi(tmp_path):
    out, rep = tmp_path / "rec.json", tmp_path / "rep.json"
    assert run("frame", "recover-phi", "--n", 3, "--samples", 4, "--seed", 5, "--out", out, "--report", rep) == 0
    assert load(rep)["round_trip_residual"] <= 1e-10
    assert all(e["kind"] == "table" for e in load(out)["families"])


def test_general_verify(tmp_path):
    fam, rep = tmp_path / "op.json", tmp_path / "rep.json"
    assert run("general", "family", "--k", 2, "--d", 3, "--seed", 1, "--out", fam) == 0
    assert run("general", "verify", "--family", fam, "--trials", 20, "--out", rep) == 0
    assert load(rep)["max_abs_residual"] <= 1e-9


def test_reconstruct_example(tmp_path):
    fam, out = tmp_path / "opfam.json", tmp_path / "rec.json"
    run("general", "family", "--k", 1, "--d", 3, "--seed", 2, "--out", fam)
    assert run("reconstruct", "--k", 1, "--d", 3, "--family", fam, "--out", out) == 0
    assert load(out)["round_trip_residual"] <= 1e-8


def test_malformed_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": 1,\n "n": }')
    assert run("frame", "verify", "--family", bad) == 2
    assert "bad.json:2:" in capsys.readouterr().err


def test_missing_subset_exits_2(tmp_path, capsys):
    fam = tmp_path / "fam.json"
    run("frame", "family", "--n", 2, "--out", fam)
    doc = load(fam)
    del doc["families"][0]
    fam.write_text(json.dumps(doc))
    assert run("frame", "verify", "--family", fam) == 2
    assert "families" in capsys.readouterr().err


def test_missing_size_exits_2():
    assert run("frame", "verify") == 2


def test_seed_falls_back_to_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("UFF_SEED", "7")
    run("uob", "gen", "--n", 3, "--out", tmp_path / "env.json")
    monkeypatch.delenv("UFF_SEED")
    run("uob", "gen", "--n", 3, "--seed", 7, "--out", tmp_path / "flag.json")
    run("uob", "gen", "--n", 3, "--out", tmp_path / "zero.json")
    # uob gen writes the basis only, with no config echo
    assert (tmp_path / "env.json").read_bytes() == (tmp_path / "flag.json").read_bytes()
    assert (tmp_path / "env.json").read_bytes() != (tmp_path / "zero.json").read_bytes()


def test_reports_are_byte_identical(tmp_path):
    # the output path is part of the echoed config, so both runs share it
    out = tmp_path / "r.json"
    blobs = []
    for _ in range(2):
        run("frame", "verify", "--n", 3, "--trials", 30, "--seed", 9, "--out", out)
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_jobs_do_not_change_results(tmp_path):
    run("frame", "verify", "--n", 3, "--trials", 12, "--seed", 4, "--jobs", 1, "--out", tmp_path / "a.json")
    run("frame", "verify", "--n", 3, "--trials", 12, "--seed", 4, "--jobs", 3, "--out", tmp_path / "b.json")
    a, b = load(tmp_path / "a.json"), load(tmp_path / "b.json")
    assert a["max_abs_residual"] == b["max_abs_residual"]
    for r in (a, b):
        r["config"].pop("jobs")
        r["config"].pop("out")
    assert a == b


def test_module_entry_point(tmp_path):
    out = tmp_path / "u.json"
    proc = subprocess.run([sys.executable, "-m", "uff.cli", "uob", "gen", "--n", "2", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and out.exists()
