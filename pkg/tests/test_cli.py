import csv
import io
import json
import subprocess
import sys

import pytest

from atparity.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_all_n3(capsys):
    code, out, _ = call(capsys, "verify", "--mode", "all", "-n", "3", "--format", "json")
    assert code == 0
    tasks = [r["task"] for r in json.loads(out)]
    assert tasks == ["per_n", "det_n", "per_det", "zappa", "thm41", "prop42"]


def test_sum_drisko_json(capsys):
    code, out, _ = call(capsys, "sum", "--mode", "drisko", "-p", "3", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["raw_sum"] == "12"
    assert d["residue_mod_p"] == 1
    assert d["status"] == "discrepancy-documented"
    assert d["expected"]["provenance"]["residue_mod_p"] == "paper"


def test_sum_classes_text(capsys):
    code, out, _ = call(capsys, "sum", "--mode", "classes", "-p", "3")
    assert code == 0
    assert "[PASS]" in out


@pytest.mark.parametrize(
    "argv, exit_code",
    [
        (["enumerate", "-n", "7"], 3),
        (["enumerate", "-n", "7", "--max-order", "7"], 3),
        (["sum", "--mode", "per_det", "-n", "5"], 3),
        (["sum", "--mode", "det_n", "-n", "6", "--extended"], 3),
        (["sum", "--mode", "per_det", "-n", "4"], 2),
        (["verify", "--mode", "nonsense", "-n", "3"], 2),
        (["verify", "--mode", "all"], 2),
        (["verify", "--mode", "lemma32"], 2),
        (["sum", "--mode", "det_n", "-n", "3", "--threads", "0"], 2),
        (["frobnicate"], 2),
    ],
)
def test_exit_codes_and_stderr_json(capsys, argv, exit_code):
    code, out, err = call(capsys, *argv)
    assert code == exit_code
    assert out == ""
    payload = json.loads(err.strip())
    assert payload["exit_code"] == exit_code
    assert "message" in payload


def test_json_determinism_without_timing(capsys):
    argv = ["verify", "--mode", "prop42", "-n", "3", "--trials", "10", "--seed", "3", "--format", "json", "--no-timing"]
    _, a, _ = call(capsys, *argv)
    _, b, _ = call(capsys, *argv)
    assert a == b
    assert "elapsed_ms" not in a


def test_threads_do_not_change_payload(capsys):
    base = ["sum", "--mode", "det_n", "-n", "4", "--format", "json", "--no-timing"]
    _, a, _ = call(capsys, *base, "--threads", "1")
    _, b, _ = call(capsys, *base, "--threads", "8")
    da, db = json.loads(a), json.loads(b)
    assert da.pop("threads") == 1 and db.pop("threads") == 8
    assert da == db
    assert da["raw_sum"] == "576"


def test_csv_matches_json(capsys):
    _, j, _ = call(capsys, "verify", "--mode", "det_n", "-n", "3", "--format", "json")
    _, c, _ = call(capsys, "verify", "--mode", "det_n", "-n", "3", "--format", "csv")
    rep = json.loads(j)
    rows = list(csv.DictReader(io.StringIO(c)))
    assert {r["quantity"] for r in rows} == set(rep["computed"])
    for r in rows:
        assert r["computed"] == rep["computed"][r["quantity"]]
        assert r["status"] == rep["status"]


def test_report_schema(capsys):
    _, out, _ = call(capsys, "verify", "--mode", "per_n", "-n", "3", "--format", "json")
    d = json.loads(out)
    for key in ("task", "params", "computed", "expected", "status", "elapsed_ms", "threads", "version"):
        assert key in d
    assert d["computed"]["L_n_coefficient"] == "12"
    assert d["expected"]["provenance"] == {"L_n_coefficient": "derived"}


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r" / "out.json"
    code, out, _ = call(capsys, "enumerate", "-n", "3", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    d = json.loads(target.read_text())
    assert d["computed"]["total"] == "12"
    assert d["computed"]["even_minus_odd"] == "0"


def test_enumerate_list(capsys):
    code, out, _ = call(capsys, "enumerate", "-n", "3", "--filter", "reduced", "--list")
    assert code == 0
    assert [json.loads(l) for l in out.splitlines()] == [[[1, 2, 3], [2, 3, 1], [3, 1, 2]]]


def test_enumerate_n1(capsys):
    code, _, _ = call(capsys, "enumerate", "-n", "1")
    assert code == 0


def test_cache_hit_and_verify(tmp_path, capsys):
    cache = tmp_path / "cache.jsonl"
    argv = ["sum", "--mode", "det_n", "-n", "3", "--format", "json", "--no-timing", "--cache", str(cache)]
    _, first, _ = call(capsys, *argv)
    assert len(cache.read_text().splitlines()) == 1
    _, second, _ = call(capsys, *argv)
    assert first == second
    code, third, _ = call(capsys, *argv, "--verify-cache")
    assert code == 0 and third == first


def test_cache_tamper_detected(tmp_path, capsys):
    cache = tmp_path / "cache.jsonl"
    argv = ["sum", "--mode", "det_n", "-n", "3", "--format", "json", "--cache", str(cache)]
    call(capsys, *argv)
    rec = json.loads(cache.read_text())
    rec["value"]["raw_sum"] = "1"
    cache.write_text(json.dumps(rec) + "\n")
    code, _, err = call(capsys, *argv, "--verify-cache")
    assert code == 1
    assert json.loads(err)["exit_code"] == 1


def test_verification_mismatch_exit_one(capsys, monkeypatch):
    from atparity import sums

    real = sums.class_permanent_sum

    def broken(p, **kw):
        r = real(p, **kw)
        r.residue_mod_p = 0
        return r

    monkeypatch.setattr(sums, "class_permanent_sum", broken)
    code, out, _ = call(capsys, "verify", "--mode", "classes", "-p", "3")
    assert code == 1
    assert "[FAIL]" in out


def test_bench(capsys):
    code, out, _ = call(capsys, "bench", "-n", "3", "--threads", "2", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["computed"]["distinct_results"] == "1"


def test_orbits_mode_is_documented_discrepancy(capsys):
    code, out, _ = call(capsys, "verify", "--mode", "orbits", "-p", "3", "--format", "json")
    assert code == 0
    assert json.loads(out)["status"] == "discrepancy-documented"


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "atparity", "verify", "--mode", "lemma32", "-p", "3"],
        capture_output=True, text=True,
    )
    assert r.returncode == 0
    assert r.stdout.startswith("[PASS] lemma32")
