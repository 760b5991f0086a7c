import math
from fractions import Fraction

import pytest

import expanderlab as el


def test_free_group_counts():
    assert el.ball_size(2, 3) == 36
    assert el.kesten_return(2, 2) == Fraction(1, 4)
    assert el.kesten_return(2, 3) == 0


def test_quotient_orders():
    assert el.quotient_order(5) == 120
    assert el.quotient_order(35) == 40320
    scan = el.strong_approximation_scan(23)
    assert scan["threshold"] == 5
    assert [p for p, _ in scan["primes"]] == [5, 7, 11, 13, 17, 19, 23]


def test_spectrum_small_quotient():
    rep = el.spectrum(5)
    assert rep["order"] == 120
    assert len(rep["eigenvalues"]) == 120
    assert rep["eigenvalues"][0] == pytest.approx(1.0, abs=1e-9)
    assert rep["lambda2"] < 1.0
    assert all(mult >= 2 for value, mult in rep["clusters"] if abs(value - 1) > 1e-6)


def test_walk_flattens_towards_uniform():
    rows = el.walk(5, 40)
    assert rows[0]["l2_norm"] == pytest.approx(0.5)
    assert rows[-1]["l2_norm"] == pytest.approx(1 / math.sqrt(120), rel=1e-3)


def test_freeness():
    assert el.certify_free("lubotzky3", 5)["free"]
    assert not el.certify_free("sl2-elementary", 6)["free"]


def test_run_matches_cli_report():
    rep = el.run("quotient", q=35)
    assert rep["exit_code"] == 0
    assert [row["order"] for row in rep["rows"]][-1] == 40320
    assert all(passed for _, passed, _ in el.structural_suite(5))


def test_errors_carry_module_codes():
    with pytest.raises(el.ExpanderlabError, match="NotSquareFree"):
        el.quotient_order(25)
    with pytest.raises(TypeError):
        el.run("walk", bogus=1)
