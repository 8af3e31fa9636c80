import json

import pytest

from gaudin_poisson.braiding import diagonal_twist, dj_hecke
from gaudin_poisson.cli import run
from gaudin_poisson.reports import CheckReport


def reports(capsys):
    return [CheckReport.from_json(line) for line in capsys.readouterr().out.splitlines() if line.strip()]


def test_analyze_hecke(capsys):
    assert run(["analyze", "--preset", "dj-hecke", "--n", "2", "--q", "2"]) == 0
    assert capsys.readouterr().out.strip() == "ybe: true, hecke(2)"
    assert run(["analyze", "--preset", "dj-hecke", "--n", "2", "--q", "2", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"ybe": True, "classification": "hecke(2)", "witness": None}


def test_analyze_braiding_file(tmp_path, capsys):
    path = tmp_path / "b.json"
    path.write_text(json.dumps(dj_hecke(3, 2).to_json()))
    assert run(["analyze", "--braiding", str(path)]) == 0
    assert "hecke(2)" in capsys.readouterr().out


def test_skew_inverse(capsys):
    assert run(["skew-inverse", "--preset", "dj-hecke", "--n", "2", "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["B"] == [["1/2", "0"], ["0", "1/8"]]
    assert d["C"] == [["1/8", "0"], ["0", "1/2"]]


def test_verify_gaudin(capsys):
    assert run(["verify", "gaudin", "--n", "2", "--sites", "3", "--poles", "0,1,2", "--pow-max", "2",
                "--format", "json"]) == 0
    names = [r.check for r in reports(capsys)]
    assert names == sorted(names)
    assert {"hamiltonian_commutativity", "specialization", "global_trace_involution"} <= set(names)


def test_verify_jacobi_scalar_case(capsys):
    assert run(["verify", "jacobi", "--bracket", "local", "--r", "5", "--n", "1"]) == 0
    assert "[PASS]" in capsys.readouterr().out


def test_verify_braided_jacobi_twist_file(tmp_path, capsys):
    path = tmp_path / "t.json"
    path.write_text(json.dumps([[1, 2, 3], ["1/2", 1, "1/5"], ["1/3", 5, 1]]))
    code = run(["verify", "jacobi", "--bracket", "braided", "--n", "3", "--twist", str(path), "--der-max", "0",
                "--format", "json"])
    assert code == 0
    assert all(r.passed for r in reports(capsys))


@pytest.mark.parametrize("suite", ["rtrace-lemma", "re-iso", "remark1-negative"])
def test_verify_suites(suite, capsys):
    assert run(["verify", suite, "--format", "json"]) == 0
    assert reports(capsys)


def test_taylor_suite_with_classical_sign(capsys):
    assert run(["verify", "taylor", "--classical-sign", "--pow-max", "4", "--format", "json"]) == 0
    signed = reports(capsys)
    assert run(["verify", "taylor", "--pow-max", "4", "--format", "json"]) == 0
    plain = reports(capsys)
    assert [r.check for r in signed] == [r.check for r in plain] and all(r.passed for r in signed)


@pytest.mark.parametrize("argv", [
    ["verify", "gaudin", "--poles", "0,0"],
    ["verify", "gaudin", "--sites", "2", "--poles", "0,1,2"],
    ["verify", "gaudin", "--poles", "0,x"],
    ["analyze", "--preset", "dj-hecke", "--q", "1"],
    ["analyze", "--braiding", "/nonexistent.json"],
    ["verify", "nonsense"],
    [],
])
def test_input_errors_exit_2(argv, capsys):
    assert run(argv) == 2


def test_non_ybe_matrix_exits_1(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim": 2, "legs": 2,
                                "entries": [[1, 2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [3, 0, 0, 1]]}))
    assert run(["analyze", "--braiding", str(path), "--format", "json"]) == 1
    d = json.loads(capsys.readouterr().out)
    assert d["ybe"] is False and d["witness"]
    # suites still reject it as a braiding
    assert run(["verify", "rtrace-lemma", "--braiding", str(path)]) == 2


def test_deterministic_output(capsys):
    run(["verify", "rtrace-lemma", "--seed", "3", "--format", "json"])
    first = [r.to_dict() | {"elapsed_ms": 0} for r in reports(capsys)]
    run(["verify", "rtrace-lemma", "--seed", "3", "--format", "json"])
    second = [r.to_dict() | {"elapsed_ms": 0} for r in reports(capsys)]
    assert first == second
