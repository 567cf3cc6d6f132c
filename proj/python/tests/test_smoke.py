import math

import numpy as np
import pytest

import ssf3


def test_eig_exchange_matrix():
    w, u = ssf3.eig(np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(w, [-1.0, 1.0])
    assert np.allclose(u.conj().T @ u, np.eye(2))


def test_non_hermitian_rejected():
    with pytest.raises(ssf3.NonHermitianError):
        ssf3.eig(np.array([[0, 1], [2, 0]], dtype=complex))


def test_scalar_case_density():
    a = np.zeros((1, 1), dtype=complex)
    v = np.ones((1, 1), dtype=complex)
    eta = ssf3.eta_density(a, v, grid_size=201)
    assert eta.support == (-1.0, 1.0)
    x = np.asarray(eta.grid)
    expected = np.where((x > 0) & (x < 1), 0.5 * (1 - x) ** 2, 0.0)
    expected[np.isclose(x, 0.0)] = 0.5
    assert np.max(np.abs(np.asarray(eta.values) - expected)) < 1e-8
    assert eta.moment(0) == pytest.approx(1.0 / 6.0, abs=1e-12)


def test_trace_formula_random():
    a, v = ssf3.random_instance(11, 4, 0.8)
    eta = ssf3.eta_density(a, v, grid_size=51)
    r = ssf3.trace_formula_residual(a, v, "monomial:6", eta)
    assert r["residual"] < 1e-6
    assert ssf3.remainder_simplex_poly(a, v, 6) == pytest.approx(r["lhs"], rel=1e-8)


def test_routes_agree():
    a, v = ssf3.random_instance(5, 3, 0.5)
    x = v
    d_poly = ssf3.d1_poly(a, x, 4)
    d_div = ssf3.d1_divdiff("monomial:4", a, x)
    assert np.max(np.abs(d_poly - d_div)) < 1e-9 * max(1.0, np.max(np.abs(d_poly)))
    d_f = ssf3.d1_fourier("gauss:0,1", a, x)
    d_g = ssf3.d1_divdiff("gauss:0,1", a, x)
    assert np.max(np.abs(d_f - d_g)) < 1e-6


def test_pinch_pythagoras():
    a, v = ssf3.random_instance(2, 5)
    v1, v2 = ssf3.pinch(a, v)
    total = np.linalg.norm(v) ** 2
    assert abs(np.linalg.norm(v1) ** 2 + np.linalg.norm(v2) ** 2 - total) < 1e-12 * total
    r1, r2 = ssf3.resolvent_pinch(a, v)
    assert np.allclose(r1, v1, atol=1e-10)


def test_palindrome_and_parser():
    assert ssf3.palindrome_sum_identity([1, 1]) == (6, 6, True)
    assert ssf3.parse_function_spec("monomial:3") == "poly:0,0,0,1"
    with pytest.raises(ssf3.ParseError, match="index 6"):
        ssf3.parse_function_spec("poly:1,,2")


def test_remainder_fourier_matches_trace():
    a, v = ssf3.random_instance(9, 3, 0.7)
    r = ssf3.remainder_fourier("gauss:0,1", a, v)
    ref = ssf3.remainder_trace("gauss:0,1", a, v, 3)
    assert abs(r["value"] - ref) <= 1e-5 * (1 + abs(ref))
    assert math.isfinite(r["half_order_value"])
