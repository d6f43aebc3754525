import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from lambertfact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_matrix_csv_reproduces_published_table(capsys, published):
    code, out, _ = run(capsys, "matrix", "--kind", "deriv", "--t", "1", "--N", "12", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n," + ",".join(str(k) for k in range(1, 13))
    body = [[Fraction(x) for x in line.split(",")[1:]] for line in lines[1:]]
    assert body == published["s_1"]


def test_matrix_json_is_exact(capsys):
    code, out, _ = run(capsys, "matrix", "--kind", "deriv-inv", "--N", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data == {"kind": "deriv-inv", "start": 1, "dim": 3, "entries": [
        ["1/1", "0/1", "0/1"], ["-1/2", "1/2", "0/1"], ["-1/3", "1/3", "1/3"]]}


def test_matrix_tdiv_pretty(capsys):
    code, out, _ = run(capsys, "matrix", "--kind", "tdiv", "--N", "6")
    assert code == 0
    assert out.splitlines()[-1] == "1 1 1 0 0 1"


def test_singular_hadamard_inverse_exit_code(capsys):
    code, _, err = run(capsys, "matrix", "--kind", "hadamard-inv", "--f", "mu", "--N", "8")
    assert code == 2
    assert "f~(2)=0" in err


def test_unknown_function_is_usage_error(capsys):
    code, _, err = run(capsys, "matrix", "--kind", "hadamard", "--f", "zeta", "--N", "4")
    assert code == 2
    assert "unknown function" in err


def test_verify_hadamard_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "hadamard", "--f", "id", "--N", "20")
    assert code == 0
    report = json.loads(out)
    assert report["passed"] and report["suite"] == "hadamard"
    assert all(r["n_range"] == [1, 20] for r in report["results"])


def test_verify_reports_first_counterexample(capsys):
    code, out, err = run(capsys, "verify", "--suite", "derivatives", "--t", "2", "--N", "20")
    assert code == 1
    report = json.loads(out)
    failed = [r for r in report["results"] if not r["passed"]]
    assert failed[0]["identity"] == "full_derivative_formula"
    assert failed[0]["first_failure"]["n"] == 3
    assert "full_derivative_formula" in err


def test_zeta_csv(capsys):
    code, out, _ = run(capsys, "zeta", "--variant", "deriv_t1", "--s", "3", "--N", "50", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 51
    assert lines[50].split(",")[1] == "1/125000"


def test_zeta_tail(capsys):
    code, out, _ = run(capsys, "zeta", "--variant", "sigma_st", "--s", "2", "--t", "1", "--N", "100")
    assert code == 0
    assert float(json.loads(out)["rows"][-1]["abs_error"]) <= 0.01


def test_zeta_rejects_s_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["zeta", "--s", "1", "--N", "5"])
    assert exc.value.code == 2


def test_precision_floor(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["exotic", "--kind", "totient", "--upto", "5", "--precision", "32"])
    assert exc.value.code == 2


def test_omega_and_exotic_tables(capsys):
    code, out, _ = run(capsys, "omega", "--upto", "200", "--format", "csv")
    assert code == 0 and out.count("true") == 200
    code, out, _ = run(capsys, "exotic", "--kind", "totient", "--upto", "60")
    assert code == 0 and json.loads(out)["all_match"]
    code, out, err = run(capsys, "exotic", "--kind", "von-mangoldt", "--upto", "30", "--precision", "128")
    assert code == 0
    assert float(json.loads(out)["max_abs_deviation"]) <= 1e-20


def test_derivative_command(capsys):
    code, out, _ = run(capsys, "derivative", "--t", "2", "--N", "12", "--form", "stirling")
    assert code == 0
    code, _, _ = run(capsys, "derivative", "--t", "2", "--N", "12")
    assert code == 1


def test_output_is_deterministic_and_jobs_independent(capsys):
    _, a, _ = run(capsys, "omega", "--upto", "60")
    _, b, _ = run(capsys, "omega", "--upto", "60", "--jobs", "3")
    _, c, _ = run(capsys, "omega", "--upto", "60")
    assert a == b == c


def test_output_file_is_utf8(tmp_path, capsys):
    target = tmp_path / "m.csv"
    assert main(["matrix", "--kind", "c", "--N", "5", "--format", "csv", "-o", str(target)]) == 0
    assert target.read_text(encoding="utf-8").startswith("n,1,2,3,4,5")


def test_cache_directory_is_written(tmp_path):
    env = dict(os.environ, LAMBERTFACT_CACHE_DIR=str(tmp_path))
    subprocess.run([sys.executable, "-m", "lambertfact", "matrix", "--kind", "partition", "--N", "30"],
                   check=True, env=env, capture_output=True)
    assert (tmp_path / "partitions.bin").stat().st_size > 0
