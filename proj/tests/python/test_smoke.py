import math

import numpy as np
import pytest

import fracstep


def test_single_step_quadratic():
    rep = fracstep.step_candidates("x^2+3*x+1", 0.5)
    best = rep["roots"][0]
    assert best["admissible"]
    assert best["candidate"] == pytest.approx((-3 + math.sqrt(5)) / 2, abs=1e-12)


def test_no_admissible_step():
    rep = fracstep.step_candidates("x^2+3*x+1", 5.0)
    assert not any(r["admissible"] for r in rep["roots"])


def test_negative_discriminant_raises():
    with pytest.raises(fracstep.NoRealStepError):
        fracstep.step_candidates("x^2+1", 1.0)


def test_parse_error_is_a_value_error():
    with pytest.raises(ValueError):
        fracstep.evaluate("1+*2")


def test_iterate_and_newton():
    t = fracstep.solve("x^3+2*x^2-4*x-8", 2.5)
    assert t["termination"] == "converged"
    assert t["rows"][-1]["x"] == pytest.approx(2.0, abs=1e-10)
    n = fracstep.newton("x^2-2", 1.0)
    assert n["rows"][-1]["x"] == pytest.approx(math.sqrt(2))


def test_expression_helpers():
    assert fracstep.evaluate("x*y+1", {"x": 2.0, "y": 3.0}) == 7.0
    assert fracstep.evaluate(fracstep.derivative("x^3"), {"x": 2.0}) == pytest.approx(12.0)


def test_gamma_and_quadrature():
    assert fracstep.log_abs_gamma(5.0) == pytest.approx(math.lgamma(5.0))
    assert fracstep.gamma_sign(-0.5) == -1
    want = math.gamma(3) / math.gamma(3.5) * 2.0 ** 2.5
    assert fracstep.rl_integral("x^2", 0.0, 2.0, 0.5) == pytest.approx(want, rel=1e-9)


def test_beta_scan():
    r = fracstep.beta_scan("x^2+3*x+1", 0.5, 0.0, 0.25, -2.01, tol=0.013, decimals=3)
    assert r["found"]
    assert r["beta"] == pytest.approx(-2.86)
    r = fracstep.beta_scan("x^3+2*x^2-4*x-8", -2.0, -2.5, -2.25, -3.01, tol=0.009)
    assert not r["found"]


def test_system():
    sp = fracstep.example_system()
    assert sp.variables == ["x1", "x2", "x3"]
    assert sp.objective(np.zeros(3)) == pytest.approx(58.456, abs=5e-3)
    rep = sp.step_candidates(np.array([2 / 3, 0.0032, -0.523]))
    assert rep["delta"] > 0
    for c in rep["candidates"]:
        np.testing.assert_array_equal(c["point"], np.array([2 / 3, 0.0032, -0.523]) + c["z"])
    step = sp.gd_step(np.zeros(3), 1e-3)
    np.testing.assert_allclose(step, [0.0075, 0.002, -0.20944], atol=1e-6)
    run = sp.gd_run(np.zeros(3), 1e-3, 0.43)
    assert 50 <= run["iterations"] <= 150


def test_custom_system():
    sp = fracstep.System(["x-1", "y+2"], ["x", "y"])
    np.testing.assert_allclose(sp.gradient(np.zeros(2)), [-1.0, 2.0])
    np.testing.assert_allclose(sp.hessian(np.zeros(2)), np.eye(2))


def test_repro_suite():
    rows = fracstep.repro_suite()
    assert len(rows) >= 12
    assert all(r["pass"] for r in rows)
    assert not all(r["pass"] for r in fracstep.repro_suite(0.5))
