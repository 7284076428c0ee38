"""CLI behavior: exit codes, JSON schema and round-trip, corpus runner."""
import io
import json
import os

from liouville.cli import RunConfig, run, main, run_corpus
from liouville.syntax import parse
from liouville.tower import build_tower, convert_expr

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus", "basic.txt")


def run_text(text, **kw):
    out = io.StringIO()
    code = run(RunConfig(integrand=text, **kw), out=out)
    return code, out.getvalue()


def test_exit_codes():
    code, out = run_text("1/x")
    assert code == 0 and "log(x)" in out

    code, out = run_text("exp(x^2)")
    assert code == 1 and "Risch ODE" in out and "2*x" in out

    code, out = run_text("x^(1/2)")
    assert code == 2 and "unsupported" in out

    code, out = run_text("log(")
    assert code == 2 and "column 5" in out


def test_invalid_interval_rejected():
    assert main(["1/x", "--interval", "2,1"]) == 2


def test_json_output_schema():
    code, out = run_text("1/(x^2-1)", json_output=True)
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "elementary"
    assert {"lambda", "arg"} <= set(payload["logs"][0].keys())
    assert payload["verification"]["symbolic_ok"] is True
    assert payload["verification"]["max_abs_error"] < 1e-6

    code, out = run_text("exp(x^2)", json_output=True)
    assert code == 1
    payload = json.loads(out)
    assert payload["status"] == "non_elementary"
    assert payload["certificate"]["kind"] == "risch_ode_unsolvable"
    assert "y'" in payload["certificate"]["ode"]
    assert payload["assumptions"]


def test_json_round_trip_reverifies():
    """The rendered r0 and log arguments re-parse and rebuild a form whose
    derivative still matches the integrand exactly."""
    for text in ["1/x", "1/(x^2-1)", "log(x)", "1/(x*log(x))", "x*exp(x)",
                 "1/(x^2+1)^2"]:
        code, out = run_text(text, json_output=True)
        assert code == 0
        payload = json.loads(out)
        t, f = build_tower(parse(text))
        r0 = convert_expr(t, parse(payload["r0"]))
        total = t.derive(r0)
        for entry in payload["logs"]:
            lam = convert_expr(t, parse(entry["lambda"]))
            arg = convert_expr(t, parse(entry["arg"]))
            total = total + lam * t.derive(arg) / arg
        assert (total - f).is_zero(), text


def test_no_verify_flag():
    code, out = run_text("1/x", verify=False)
    assert code == 0


def test_corpus_runner():
    out = io.StringIO()
    code = run_corpus(CORPUS, "x", out)
    text = out.getvalue()
    assert code == 0, text
    assert "corpus entries passed" in text
    assert "FAIL" not in text


def test_corpus_empty(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("# nothing here\n\n")
    out = io.StringIO()
    assert run_corpus(str(p), "x", out) == 0
    assert "0/0" in out.getvalue()


def test_corpus_wrong_verdict(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("1/x ; non_elementary\n")
    out = io.StringIO()
    assert run_corpus(str(p), "x", out) == 1
    assert "FAIL" in out.getvalue()


def test_corpus_malformed_line(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("1/x\n")
    out = io.StringIO()
    assert run_corpus(str(p), "x", out) == 2
    assert "line 1" in out.getvalue()


def test_var_flag():
    code, out = run_text("1/u", var="u")
    assert code == 0 and "log(u)" in out


def test_degree_cap_env(monkeypatch):
    monkeypatch.setenv("LIOUVILLE_MAX_DEGREE", "3")
    code, out = run_text("x^9*exp(x)")
    assert code == 2 and "LIOUVILLE_MAX_DEGREE" in out
    monkeypatch.delenv("LIOUVILLE_MAX_DEGREE")
    code, out = run_text("x^9*exp(x)")
    assert code == 0


def test_radical_rendering():
    code, out = run_text("1/(x^2-2)")
    assert code == 0
    assert "sqrt(2)" in out and "log(x - sqrt(2))" in out
