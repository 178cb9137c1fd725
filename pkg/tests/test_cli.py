import json
import subprocess
import sys

import pytest

from defectlab.cli import main


def run(argv):
    return main(argv)


def test_field(capsys):
    assert run(["field", "--base", "fp_t", "--p", "2"]) == 0
    out = capsys.readouterr().out
    assert "rational_function" in out


def test_distance_fp_t(capsys):
    assert run(["distance", "--base", "fp_t", "--p", "2", "--budget", "3"]) == 0
    out = capsys.readouterr().out
    assert "1/2+" in out and "(exact)" in out


def test_semitame_exit_codes(capsys):
    assert run(["semitame", "--base", "laurent", "--p", "2"]) == 2
    out = capsys.readouterr().out
    assert "t^1/2" in out
    assert run(["semitame", "--base", "pdiv_tower", "--p", "2"]) == 0


def test_asfamily_writes_file(tmp_path, capsys):
    out_path = tmp_path / "fam.json"
    code = run(["asfamily", "--base", "fp_t", "--p", "2", "--n", "4",
                "--budget", "3", "--out", str(out_path)])
    assert code == 0
    obj = json.loads(out_path.read_text())
    assert len(obj["certs"]) == 4
    assert run(["verify", str(out_path)]) == 0


def test_asfamily_perfect_field(capsys):
    assert run(["asfamily", "--base", "pdiv_tower", "--p", "2", "--n", "3"]) == 0
    out = capsys.readouterr().out
    assert "none" in out


def test_kummerfamily(tmp_path, capsys):
    out_path = tmp_path / "ku.json"
    code = run(["kummerfamily", "--base", "qp_pdiv_tower", "--p", "2",
                "--n", "3", "--budget", "5", "--out", str(out_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "super_dependent" in out
    assert run(["verify", str(out_path)]) == 0


def test_sigma(capsys):
    assert run(["sigma", "--base", "pdiv_tower", "--p", "2", "--budget", "3"]) == 0
    out = capsys.readouterr().out
    assert "independent_consistent" in out


def test_verify_tampered(tmp_path, capsys):
    out_path = tmp_path / "fam.json"
    run(["asfamily", "--base", "fp_t", "--p", "2", "--n", "2",
         "--budget", "3", "--out", str(out_path)])
    obj = json.loads(out_path.read_text())
    obj["certs"][0]["sample"]["realized"][0]["value"] = "-9/1"
    out_path.write_text(json.dumps(obj))
    assert run(["verify", str(out_path)]) == 2


def test_usage_error():
    assert run(["nope"]) == 64


def test_subprocess_entry(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "defectlab", "semitame", "--base", "fp_t", "--p", "2"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 2
    assert "refuted" in proc.stdout
