import json
import subprocess
import sys

import pytest

from hecketrace.cli import main

SPECTRUM = {"n": 5, "p1": 3, "p2": 2, "s": 3, "ker1": 2,
            "entries": [{"rep": "St(5;z;0)", "cpi": "1", "zeta": "0/1"}]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_satake_golden(capsys):
    assert run(capsys, "satake", "2", "1", "1") == (0, "q^(1/2)*X1^1 + q^(1/2)*X2^1\n", "")


def test_min_reps_goldens(capsys):
    assert run(capsys, "min-reps", "--shape", "2,1", "--type", "2,1")[1] == "[1,2,3]\n[1,3,2]\n"
    assert run(capsys, "min-reps", "--shape", "1,1", "--type", "1,1")[1] == "[1,2]\n[2,1]\n"


def test_tableau_worked_example(capsys):
    code, out, _ = run(capsys, "tableau", "--perm", "1,3,4,2,5,7,6,8,9,10", "--shape", "5,2,3", "--type", "3,3,4")
    assert code == 0
    lines = out.splitlines()
    assert lines[:3] == ["1 2 1 1 2", "3 2", "3 3 3"]
    assert "distinct entries per row: 2,2,1" in lines


def test_speh_expand(capsys):
    out = run(capsys, "speh-expand", "2", "2", "--char", "z;0")[1]
    assert out == "+1 Ind[St(2;z;-1/2),St(2;z;1/2)]\n-1 Ind[St(3;z;0),St(1;z;0)]\n"


def test_classify(capsys):
    assert run(capsys, "classify", "--rep", "Speh(2,2;z;0)", "--p1", "2", "--p2", "2")[1] == "TypeII (regime TypeII)\n"


def test_trace_engine_and_closed_form(capsys):
    out = run(capsys, "trace", "engine", "--lambda", "1^1,0^1", "--rep", "St(2;z;0)")[1]
    assert out == "# provenance=engine sign=proof\nz^1\n"
    out = run(capsys, "trace", "closed-form", "--case", "1", "--lambda", "1^1,0^1",
              "--sign-convention", "statement")[1]
    assert out == "# provenance=closed_form sign=statement\n-z^1\n"


def test_numeric_q(capsys):
    out = run(capsys, "trace", "closed-form", "--case", "2", "--lambda", "1^1,0^1",
              "--numeric-q", "4", "--symbol-value", "z=1")[1]
    assert out.splitlines()[-1] == "numeric: 4+0j"


def test_domain_error_exit_two(capsys):
    code, out, err = run(capsys, "trace", "closed-form", "--case", "3", "--n", "5")
    assert code == 2 and out == ""
    assert err == "error: closed form case 3 requires n even, got n=5\n"
    assert run(capsys, "min-reps", "--shape", "2,1", "--type", "2,2")[0] == 2


def test_unsupported_exit_three(capsys):
    code, _, err = run(capsys, "trace", "engine", "--lambda", "1/2^4", "--rep", "Triv(4;z;0)")
    assert code == 3 and err.startswith("error: ")


def test_usage_error_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["satake", "two"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_json_mode(capsys):
    code, out, _ = run(capsys, "--format", "json", "satake", "2", "1", "1")
    assert json.loads(out) == {"command": "satake", "exit": 0, "lines": ["q^(1/2)*X1^1 + q^(1/2)*X2^1"]}
    code, out, _ = run(capsys, "--format", "json", "trace", "closed-form", "--case", "3", "--n", "5")
    assert code == 2 and json.loads(out)["exit"] == 2


def test_aggregate(tmp_path, capsys):
    path = tmp_path / "spectrum.json"
    path.write_text(json.dumps(SPECTRUM))
    code, out, _ = run(capsys, "aggregate", "--spectrum", str(path), "--lambda", "2/3^3,1/2^2")
    single = run(capsys, "trace", "engine", "--lambda", "2/3^3,1/2^2", "--rep", "St(5;z;0)")[1].splitlines()[1]
    assert code == 0 and out.strip() != "0"
    assert "z^3" in out and "z^3" in single
    assert run(capsys, "aggregate", "--spectrum", str(tmp_path / "missing.json"), "--lambda", "2/3^3,1/2^2")[0] == 2


def test_verify_subset_and_failure_exit(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "A1,A6")
    assert code == 0 and out.splitlines()[-1] == "passed 2/2, failed 0"
    code, out, _ = run(capsys, "verify", "--suite", "A7")
    assert code == 1 and out.startswith("A7 FAIL")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hecketrace", "satake", "2", "1", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "q^(1/2)*X1^1 + q^(1/2)*X2^1\n"
