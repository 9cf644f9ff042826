import math
import os
import sys

sys.path.insert(0, os.environ.get("CMZV_MODULE_DIR", "."))
import _cmzv


def close(s, v, tol=1e-10):
    return abs(float(s) - v) < tol


def test_version():
    assert _cmzv.__version__


def test_exact_arithmetic():
    assert _cmzv.binomial(6, 3) == "20"
    assert _cmzv.harmonic(3) == "11/6"
    assert _cmzv.harmonic(2, 2) == "5/4"
    assert _cmzv.central_coeff(1) == "1/30"
    assert _cmzv.central_coeff_ratio(1) == "1/77"
    assert int(_cmzv.check_divisibility(7)) > 0
    t = _cmzv.telescoping("A", 50)
    assert t["ok"] and t["first_bad"] == -1 and t["n_checked"] == 50


def test_constants():
    re, im = _cmzv.constant("pi", 30)
    assert close(re, math.pi) and float(im) == 0.0
    tags = _cmzv.constant_tags()
    assert "sqrt2" in tags and "lchi8" in tags


def test_polylogarithms():
    re, im = _cmzv.li(2, "1/2", 30)
    assert close(re, math.pi ** 2 / 12 - math.log(2) ** 2 / 2)
    assert float(im) == 0.0
    assert close(_cmzv.zeta(3, 30), 1.2020569031595943)


def test_series():
    r = _cmzv.sum_series("k0=1 z=8 weight=(50k-7)/k", 40)
    assert close(r["re"], 2 * math.sqrt(2) * math.pi + 4)
    assert r["terms"] > 0
    assert float(r["tail"]) < 1e-40


def test_iterated_integrals():
    re, im = _cmzv.gpl(["0", "-1"], 30)
    assert close(re, math.pi ** 2 / 12)
    re, im = _cmzv.mpl([2], ["1"], 30)
    assert close(re, math.pi ** 2 / 6)
    re, im = _cmzv.mpl([1, 1], ["1/2", "1/3"], 30)
    assert abs(float(im)) < 1e-25


def test_expressions():
    re, im = _cmzv.eval_expr("(+ (* 15 sqrt2 pi) 27)", 40)
    assert close(re, 15 * math.sqrt(2) * math.pi + 27)
    re, im = _cmzv.eval_expr("(atanhinv x)", 30, x2="4")
    assert close(re, math.atanh(0.5))


def test_cubic_structures():
    c = _cmzv.cubic("2", 30)
    assert c["z"] == "8"
    assert len(c["roots_plus"]) == 3 and len(c["roots_minus"]) == 3
    assert close(c["x"], math.sqrt(2))
    re, im = _cmzv.special("frakL", "2", 30)
    assert abs(float(im)) < 1e-10 and float(re) != 0.0


def test_catalog():
    recs = _cmzv.records(group="headline")
    assert len(recs) == 11
    assert all(r["role"] == "acceptance" for r in recs)
    rep = _cmzv.verify("eq1.12", 50)
    assert rep["status"] == "PASS"
    assert rep["abs_diff"] < 1e-40
