import json
import os

from catsolve.cli import main

from conftest import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_series_geometric(capsys):
    code, out, _ = run(capsys, "series", fixture_path("geometric.dde"),
                       "--order", "5")
    assert code == 0
    assert "F = 1 + t + t^2 + t^3 + t^4 + O(t^5)" in out


def test_series_unbound_parameter(capsys):
    code, _, err = run(capsys, "series", fixture_path("hard_unbound.dde"))
    assert code == 1
    assert "unbound parameter s" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "solve", "/nonexistent/file.dde")
    assert code == 1
    assert err


def test_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.dde"
    bad.write_text("system { unknowns F\n")
    code, _, err = run(capsys, "series", str(bad))
    assert code == 1


def test_solve_scalar_json_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    code1, _, _ = run(capsys, "solve", fixture_path("scalar.dde"),
                      "--json", str(out1))
    code2, _, _ = run(capsys, "solve", fixture_path("scalar.dde"),
                      "--json", str(out2))
    assert code1 == 0 and code2 == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2

    rep = json.loads(b1)
    assert rep["schema"] == 1
    assert rep["certificate"] == "Both"
    assert rep["eliminant"] == rep["minimal"]
    assert rep["genericity"] == {"degree": 3, "kind": "ZeroDimensional"}
    assert "16*z0^3*t^4" in rep["minimal"]
    # exactness contract: no floats anywhere in the report
    assert not _has_float(rep)


def _has_float(obj):
    if isinstance(obj, float):
        return True
    if isinstance(obj, dict):
        return any(_has_float(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_has_float(v) for v in obj)
    return False


def test_solve_rejects_series_only_system(capsys):
    code, _, err = run(capsys, "solve", fixture_path("geometric.dde"))
    assert code == 1
    assert "series" in err


def test_analyze_scalar_text(capsys):
    code, out, _ = run(capsys, "analyze", fixture_path("scalar.dde"))
    assert code == 0
    assert "Det = 2*x1*u^2*t - u + t" in out
    assert "zero-dimensional, degree 3" in out


def test_analyze_budget_exhausted(capsys):
    code, out, _ = run(capsys, "analyze", fixture_path("ex11.dde"),
                       "--budget-pairs", "5", "--format", "json")
    assert code == 2
    rep = json.loads(out)
    assert rep["genericity"] is None
    assert "budget" in rep.get("budget_error", "").lower() or \
        rep.get("budget_error")


def test_invalid_budget(capsys):
    code, _, err = run(capsys, "solve", fixture_path("scalar.dde"),
                       "--budget-pairs", "0")
    assert code == 1
