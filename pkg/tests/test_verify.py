"""Verification layer: exact re-differentiation and quadrature spot checks."""
import math

import pytest

from liouville.syntax import parse
from liouville.tower import build_tower
from liouville.integrate import integrate, LiouvilleForm
from liouville.verify import (
    verify_derivative, numeric_check, SingularIntervalError, _adaptive_simpson,
)


def run(text):
    t, f = build_tower(parse(text))
    res = integrate(t, f)
    assert isinstance(res, LiouvilleForm)
    return t, f, res


def test_verify_derivative_examples():
    # x log x - x vs log x
    t, f, res = run("log(x)")
    assert verify_derivative(t, res, f)
    # (0, [(1, x)]) vs 1/x
    t, f, res = run("1/x")
    assert verify_derivative(t, res, f)
    # wrong antiderivative: x vs log x
    t, f = build_tower(parse("log(x)"))
    wrong = LiouvilleForm(t.x())
    assert not verify_derivative(t, wrong, f)


def test_adaptive_simpson_ln2():
    val = _adaptive_simpson(lambda x: 1.0 / x, 1.0, 2.0)
    assert abs(val - math.log(2)) < 1e-9


def test_numeric_check_examples():
    t, f, res = run("1/x")
    rep = numeric_check(t, res, f, (1.0, 2.0))
    assert rep.symbolic_ok and rep.numeric_ok
    assert abs(rep.numeric_samples[0].quadrature) > 0

    t, f, res = run("x*exp(x)")
    rep = numeric_check(t, res, f, (0.0, 1.0))
    assert rep.symbolic_ok and rep.max_abs_error < 1e-6

    t, f, res = run("1/(x^2-1)")
    with pytest.raises(SingularIntervalError) as e:
        numeric_check(t, res, f, (0.0, 2.0))
    assert abs(e.value.where - 1.0) < 0.01


def test_numeric_check_complex_logs():
    # antiderivative with lambda = +-i/4 stays real on the real axis
    t, f, res = run("1/(x^2+1)^2")
    rep = numeric_check(t, res, f, (0.0, 1.0))
    assert rep.symbolic_ok and rep.numeric_ok


def test_numeric_check_root_sums():
    t, f, res = run("1/(x^3-2)")
    assert res.root_sums
    rep = numeric_check(t, res, f, (2.0, 3.0))
    assert rep.symbolic_ok and rep.numeric_ok


def test_numeric_matches_symbolic_on_corpus():
    cases = [
        ("1/x", (1.0, 2.0)),
        ("2*x/(x^2+1)", (0.0, 1.0)),
        ("1/(x^2-1)", (2.0, 3.0)),
        ("log(x)", (1.0, 2.0)),
        ("1/(x*log(x))", (2.0, 3.0)),
        ("log(x)/x", (1.0, 2.0)),
        ("x*exp(x)", (0.0, 1.0)),
    ]
    for text, interval in cases:
        t, f, res = run(text)
        rep = numeric_check(t, res, f, interval)
        assert rep.symbolic_ok, text
        assert rep.numeric_ok, (text, rep.max_abs_error)
