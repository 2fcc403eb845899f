import io
import json
import subprocess
import sys

import pytest

from novak.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run("--json", *argv)
    assert code == 0, err
    assert out.count("\n") == 1
    return json.loads(out)


def test_check_json():
    obj = run_json("check", "171")
    assert obj["n"] == "171" and obj["is_novak"] is True
    assert obj["schema_version"] == 1
    assert obj["config"]["trial_bound"] == 1000000


def test_check_human_and_invalid():
    code, out, _ = run("check", "171")
    assert code == 0 and "171" in out
    assert run("check", "0")[0] == 2
    assert run("check", "abc")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run()[0] == 2


def test_options_after_subcommand():
    code, out, _ = run("check", "9", "--json")
    assert code == 0 and json.loads(out)["is_novak"] is True


def test_list_csv_and_json():
    code, out, _ = run("--csv", "list", "--max", "1000")
    assert code == 0
    assert out.splitlines() == ["index,n"] + [f"{i},{v}" for i, v in enumerate([1, 3, 9, 27, 81, 171, 243, 513, 729], 1)]
    obj = run_json("list", "--max", "1000", "--exclude-one", "--method", "closure")
    assert obj["elements"][0] == "3" and obj["count"] == 8


def test_csv_refused_for_scalar_output():
    assert run("--csv", "check", "3")[0] == 2


def test_workers_do_not_change_results():
    a = run_json("list", "--max", "100000", "--workers", "1")
    b = run_json("list", "--max", "100000", "--workers", "2")
    a.pop("config"), b.pop("config")
    assert a == b


def test_json_is_byte_stable():
    assert run("--json", "pset", "--level", "inf", "--max", "10000") == run("--json", "pset", "--level", "inf", "--max", "10000")


def test_primes_table1_and_certify():
    obj = run_json("primes", "--max", "10000", "--table1", "--certify")
    assert obj["primes"][6] == "9137"
    assert len(obj["certificates"]) == 7
    assert obj["table1"][3]["flags"] == ["two", "novak", "neither", "novak"]
    code, out, _ = run("primes", "--max", "1000", "--certify")
    lines = [json.loads(line) for line in out.splitlines() if line.startswith("{")]
    assert [c["q"] for c in lines] == ["3", "19", "163", "571"]


def test_zsig_and_omega():
    assert run_json("zsig", "--a", "2", "--b", "1", "--n", "9")["prime"] == "19"
    obj = run_json("zsig", "--a", "2", "--b", "1", "--n", "3")
    assert obj["exceptional"] and obj["prime"] is None
    assert run_json("omega-lower", "--n", "81")["bound"] == 4
    assert run("omega-lower", "--n", "8")[0] == 2


def test_bound_dlower_witness():
    obj = run_json("bound", "--x", "1000000", "--witness", "81")
    assert obj["omega_lower"] == 6 and obj["holds"] is True and obj["count"] == 40
    assert run("bound", "--x", "1000", "--witness", "5")[0] == 2
    obj = run_json("dlower", "--max", "1000")
    assert obj["value"] == 8 and obj["witness"] == "243"
    assert run_json("witness", "--n", "1", "--k", "2")["N"] == "81"


def test_carmichael_pset_saturate_conj():
    assert run_json("carmichael", "check", "220")["is_novak_carmichael"] is True
    assert run_json("carmichael", "list", "--max", "10")["elements"] == ["1", "2", "4", "6", "8"]
    assert run_json("pset", "--level", "0", "--max", "30")["primes"] == ["3", "11", "19"]
    assert run("pset", "--level", "-1", "--max", "30")[0] == 2
    obj = run_json("saturate", "--p", "163")
    assert obj["A"] == "26406" and obj["N"] == "13203"
    obj = run_json("conj", "--grid", "10000")
    assert obj["rows"] == [{"x": "10000", "p_inf": 5, "p_levels": [311, 41, 7, 5, 5]}]


def test_budget_exits(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("saturation_ceiling_bits = 8\n")
    assert run("--config", str(cfg), "saturate", "--p", "163")[0] == 3
    assert run("saturate", "--p", "163")[0] == 0
    assert run("--trial-bound", "2", "--rho-iterations", "1", "carmichael", "check", str(1000003 * 1000033))[0] == 3


def test_divseq(tmp_path):
    obj = run_json("divseq", "check", "--a", "2", "--b", "-1", "--minus", "--bound", "30")
    assert all(v["status"] == "pass" for v in obj["axioms"].values())
    assert obj["axioms"]["zsigmondy"]["exceptions"] == [2, 3]
    obj = run_json("divseq", "check", "--a", "2", "--b", "1", "--plus", "--bound", "10")
    assert obj["axioms"]["divisibility"]["status"] == "fail"
    spec = tmp_path / "s.txt"
    spec.write_text("family = power\na = 2\nb = -1\nsign = -\n")
    obj = run_json("divseq", "selfdiv", "--spec", str(spec), "--max", "1000")
    assert obj["U"] == 9
    assert run("divseq", "check", "--bound", "5")[0] == 2


def test_cache_lifecycle(tmp_path):
    seeded = tmp_path / "seed.txt"
    assert run("cache", "seed", "--max", "100", "--out", str(seeded))[0] == 0
    obj = run_json("cache", "stats", str(seeded))
    complete = {int(n) for n in obj["complete"]}
    assert set(range(1, 41, 2)) <= complete
    assert run("cache", "verify", str(seeded))[0] == 0

    bad = tmp_path / "bad.txt"
    bad.write_text("2+ 1: 3\n2+ 2: 5\n2+ 3: 3^3\n")
    code, _, err = run("cache", "verify", str(bad))
    assert code == 3 and ":3:" in err

    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("2+ 1: 3\n2+ 2: 5\n")
    b.write_text("2+ 3: 3^2\n")
    out = tmp_path / "m.txt"
    obj = run_json("cache", "merge", str(a), str(b), "--out", str(out))
    assert obj["records"] == 3
    b.write_text("2+ 18: 5 C52429\n")
    a.write_text("2+ 18: 13 C20165\n")
    assert run("cache", "merge", str(a), str(b), "--out", str(out))[0] == 2
    assert run_json("cache", "merge", str(a), str(b), "--out", str(out), "--refine")["records"] == 1


def test_cache_env_and_config(tmp_path, monkeypatch):
    cache = tmp_path / "c.txt"
    cache.write_text("2+ 3: 3^2\n")
    monkeypatch.setenv("NOVAK_CACHE", str(cache))
    assert run_json("check", "3")["config"]["cache"] == str(cache)
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("trial_bound = 5000\n")
    assert run_json("--config", str(cfg), "check", "3")["config"]["trial_bound"] == 5000
    monkeypatch.setenv("NOVAK_CACHE", str(tmp_path / "missing.txt"))
    assert run("check", "3")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "novak", "--json", "check", "171"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["is_novak"] is True


def test_counterexample_exit():
    code, _, err = run("saturate", "--p", "11")
    assert code == 1 and "counterexample" in err
