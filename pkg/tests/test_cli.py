import json
import subprocess
import sys

import pytest

from affine_cybe import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cybe_sl2(capsys):
    code, out, _ = run(["cybe", "--algebra", "sl2.json", "--r-file", "he.json"], capsys)
    assert code == 0
    assert json.loads(out)["stages"]["cybe"]["cybe_ok"] is True


def test_completeness_aff1(capsys):
    code, out, _ = run(["completeness", "--algebra", "aff1.json", "--omega-file", "std.json"], capsys)
    rep = json.loads(out)["stages"]["completeness"]
    assert code == 0
    assert rep["complete"] is False and rep["traces"] == ["0", "-2"]


def test_jacobi_broken(capsys):
    code, out, err = run(["jacobi", "--algebra", "broken.json"], capsys)
    assert code == 2
    rep = json.loads(out)
    assert rep["stages"]["jacobi"]["witness"] == [0, 1, 2]
    assert "Jacobi" in err


def test_certification_failure_exit_1(capsys):
    code, out, _ = run(["cybe", "--algebra", "sl2", "--r-file", "ef"], capsys)
    assert code == 1
    assert json.loads(out)["failed"] == ["cybe"]


def test_malformed_json_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{\n \"dim\": 2,,\n}")
    code, out, err = run(["jacobi", "--algebra", str(p)], capsys)
    assert code == 2
    assert "line 2" in json.loads(out)["error"]


def test_missing_file_exit_2(capsys):
    code, _, _ = run(["jacobi", "--algebra", "no_such_algebra.json"], capsys)
    assert code == 2


def test_missing_omega_for_complex_exit_2(capsys):
    code, out, _ = run(["complex", "--algebra", "aff1"], capsys)
    assert code == 2


def test_exact_mode_refuses_float_points(capsys):
    code, _, _ = run(["leaf-rank", "--algebra", "aff1", "--omega-file", "std", "--mode", "exact"], capsys)
    assert code == 2
    code, _, _ = run(["leaf-rank", "--algebra", "n4", "--omega-file", "n4_omega", "--mode", "exact"], capsys)
    assert code == 0


def test_bad_tolerance_rejected(capsys):
    code, _, err = run(["cocycle", "--algebra", "aff1", "--omega-file", "std", "--tol", "0"], capsys)
    assert code == 2


def test_report_metadata(capsys):
    code, out, _ = run(["poisson", "--algebra", "aff1", "--omega-file", "std", "--seed", "3", "-K", "12"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["schema_version"] == 1 and rep["library_version"]
    assert rep["config"]["seed"] == 3 and rep["config"]["K"] == 12
    assert set(rep["input_sha256"]) == {"algebra", "omega_file"}


def test_env_config(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 9, "samples": 3}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    code, out, _ = run(["leaf-rank", "--algebra", "n4", "--omega-file", "n4_omega"], capsys)
    rep = json.loads(out)
    assert rep["config"]["seed"] == 9 and rep["stages"]["leaf-rank"]["count"] == 3
    code, out, _ = run(["leaf-rank", "--algebra", "n4", "--omega-file", "n4_omega", "--seed", "1"], capsys)
    assert json.loads(out)["config"]["seed"] == 1


def test_text_format_and_output_file(tmp_path, capsys):
    dest = tmp_path / "report.txt"
    code, out, _ = run(["all", "--algebra", "sl2", "--r-file", "he", "--format", "text", "-o", str(dest)], capsys)
    assert code == 0 and out == ""
    text = dest.read_text()
    assert text.startswith("status: pass") and "linked" in text and "skipped" in text


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "affine_cybe", "jacobi", "--algebra", "sl2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["status"] == "pass"
