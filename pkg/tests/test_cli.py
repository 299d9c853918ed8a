import dataclasses
import json

import pytest

from liecurv import cli, verify
from liecurv.curvature import CasimirMatrix
from liecurv.model import f4_model


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_algebra_f4(capsys):
    code, out, _ = run(capsys, "algebra", "--type", "f4")
    assert code == 0
    assert "dimension       52" in out and "roots           48" in out
    assert "jacobi          pass" in out


def test_algebra_d4_json(capsys):
    code, out, _ = run(capsys, "algebra", "--type", "d4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["dimension"] == 28 and data["jacobi"] == "pass"


def test_algebra_unsupported(capsys):
    code, _, err = run(capsys, "algebra", "--type", "e8")
    assert code == 2 and "unsupported type" in err


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["dims"] == [28, 8, 8, 8]
    assert data["types"]["k_theta"] == "B4" and data["types"]["h1"] == "D4"


def test_decompose_degenerate(capsys):
    code, _, err = run(capsys, "decompose", "--tau", "0001")
    assert code == 3 and "degenerate pair" in err


def test_ricci_bi_invariant(capsys):
    code, out, _ = run(capsys, "ricci", "--u", "1,1,1,1", "--format", "json")
    data = json.loads(out)
    assert data["components"]["closed"] == ["9/2"] * 4
    assert data["components"]["connection"] == ["4.5"] * 4
    assert data["einstein"] is True


def test_ricci_solution_three(capsys):
    code, out, _ = run(capsys, "ricci", "--u", "3/5,1,1,1")
    assert code == 0 and "59/10  59/10  59/10  59/10" in out and "Einstein" in out


def test_ricci_not_einstein(capsys):
    code, out, _ = run(capsys, "ricci", "--u", "1,1,1,2", "--path", "closed")
    assert code == 0 and "not Einstein" in out


@pytest.mark.parametrize("argv", [
    ("ricci", "--u", "0,1,1,1"), ("ricci", "--u", "1,1,1"), ("ricci", "--u", "a,b,c,d"),
    ("ricci",), ("nonsense",), ("solve", "--tol", "-1"), ("solve", "--bogus"),
])
def test_input_errors(capsys, argv):
    code = None
    try:
        code = cli.main(list(argv))
    except SystemExit as e:
        code = e.code
    assert code == 4


def test_solve(capsys):
    code, out, _ = run(capsys, "solve")
    rows = [line for line in out.splitlines()[2:] if line.strip()]
    assert code == 0 and len(rows) == 4
    assert sum("non-naturally-reductive" in r for r in rows) == 1


def test_solve_json_roundtrip(capsys):
    _, out, _ = run(capsys, "solve", "--format", "json", "--tol", "1e-6")
    data = json.loads(out)
    assert len(data) == 4
    assert set(data[0]) == {"u", "constant", "residual", "exact", "classification", "provenance"}
    assert json.dumps(json.loads(out), indent=2, sort_keys=True, ensure_ascii=False) + "\n" == out


def test_deterministic(capsys):
    first = run(capsys, "verify-paper")
    second = run(capsys, "verify-paper")
    assert first == second and first[0] == 0
    assert "34/34 checks passed" in first[1]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "solve.txt"
    code, out, _ = run(capsys, "solve", "--output", str(target))
    assert code == 0 and out == ""
    assert "7/11" in target.read_text()


def test_verify_detects_bad_casimir(monkeypatch, capsys):
    good = f4_model()
    c = [row[:] for row in good.casimir.c]
    c[3][3] = 8
    bad = dataclasses.replace(good, casimir=CasimirMatrix(c))
    monkeypatch.setattr(verify, "f4_model", lambda: bad)
    code, out, _ = run(capsys, "verify-paper", "--format", "json")
    data = json.loads(out)
    assert code == 1 and not data["passed"]
    failed = {ch["name"] for ch in data["checks"] if not ch["passed"]}
    assert "column sums" in failed
