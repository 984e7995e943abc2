import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszmd.errors import DimensionError, InvalidResolutionError, OutOfRangeError
from rieszmd.spectral import (
    barycentric_eval,
    chebyshev_coefficients,
    chebyshev_values,
    differentiate,
    integrate,
    interpolation_matrix,
    make_workspace,
    resolution_indicator,
)


def test_nodes_small_cases():
    np.testing.assert_allclose(make_workspace(2).nodes, [1.0, 0.0, -1.0], atol=1e-16)
    r = math.sqrt(2) / 2
    np.testing.assert_allclose(make_workspace(4).nodes, [1.0, r, 0.0, -r, -1.0], atol=1e-16)


@pytest.mark.parametrize("N", [2, 3, 8, 17, 64, 200, 401])
def test_workspace_invariants(N):
    ws = make_workspace(N)
    np.testing.assert_allclose(ws.nodes, np.cos(np.arange(N + 1) * math.pi / N), atol=1e-15)
    assert np.all(np.diff(ws.nodes) < 0)
    assert ws.nodes[0] == 1.0 and ws.nodes[-1] == -1.0
    assert abs(ws.cc_weights.sum() - 2.0) <= 1e-14
    assert np.abs(ws.diff_matrix.sum(axis=1)).max() <= 1e-11 * N**2
    w = ws.bary_weights
    assert np.all(np.sign(w[:-1]) == -np.sign(w[1:]))
    assert abs(w[0]) == abs(w[-1]) == 0.5 * abs(w[1])


def test_nodes_are_exactly_antisymmetric():
    for N in (10, 11, 200):
        x = make_workspace(N).nodes
        assert np.array_equal(x, -x[::-1])


def test_clenshaw_curtis_weights_n2():
    # exactness for 1, l, l^2 on three points fixes the weights
    A = np.vander([1.0, 0.0, -1.0], 3, increasing=True).T
    rhs = np.array([2.0, 0.0, 2.0 / 3.0])
    np.testing.assert_allclose(make_workspace(2).cc_weights, np.linalg.solve(A, rhs), atol=1e-15)
    np.testing.assert_allclose(make_workspace(2).cc_weights, [1 / 3, 4 / 3, 1 / 3], atol=1e-15)


def test_workspace_rejects_small_n():
    for bad in (1, 0, -3, 2.5):
        with pytest.raises(InvalidResolutionError):
            make_workspace(bad)


def test_workspace_is_read_only():
    ws = make_workspace(8)
    with pytest.raises(ValueError):
        ws.nodes[0] = 3.0


def test_integrate_examples():
    ws = make_workspace(2)
    assert integrate(np.ones(3), 0.0, 3.0, ws) == pytest.approx(3.0, abs=1e-15)
    assert integrate(ws.nodes**2, -1.0, 1.0, ws) == pytest.approx(2 / 3, abs=1e-15)
    ws16 = make_workspace(16)
    assert abs(integrate(np.exp(ws16.nodes), -1, 1, ws16) - 2.3504023872876028) <= 1e-13
    assert abs(2.3504023872876028 - (math.e - 1 / math.e)) <= 1e-15


def test_integrate_orientation():
    ws = make_workspace(12)
    t = ws.mapped_nodes(0.0, 2.0)
    forward = integrate(t**3, 0.0, 2.0, ws)
    t_rev = ws.mapped_nodes(2.0, 0.0)
    assert integrate(t_rev**3, 2.0, 0.0, ws) == pytest.approx(-forward, rel=1e-14)


def test_length_mismatch():
    ws = make_workspace(8)
    with pytest.raises(DimensionError):
        integrate(np.ones(5), -1, 1, ws)
    with pytest.raises(DimensionError):
        differentiate(np.ones(10), -1, 1, ws)


@given(N=st.integers(2, 80), data=st.data())
def test_quadrature_exact_for_monomials(N, data):
    j = data.draw(st.integers(0, N))
    ws = make_workspace(N)
    exact = (1.0 - (-1.0) ** (j + 1)) / (j + 1)
    assert abs(integrate(ws.nodes**j, -1.0, 1.0, ws) - exact) <= 1e-13


def test_differentiate_examples():
    for N in (8, 100, 400):
        ws = make_workspace(N)
        assert np.abs(differentiate(np.full(N + 1, 7.0), -1, 1, ws)).max() <= 1e-11
    ws = make_workspace(20)
    t = ws.mapped_nodes(-3.0, 5.0)
    np.testing.assert_allclose(differentiate(t, -3.0, 5.0, ws), 1.0, atol=1e-12)
    ws8 = make_workspace(8)
    assert np.abs(differentiate(ws8.nodes**3, -1, 1, ws8) - 3 * ws8.nodes**2).max() <= 1e-12


@given(N=st.integers(2, 60), data=st.data())
def test_differentiation_of_monomials(N, data):
    k = data.draw(st.integers(1, N))
    ws = make_workspace(N)
    x = ws.nodes
    err = np.abs(ws.diff_matrix @ x**k - k * x ** (k - 1)).max()
    assert err <= 1e-10 * N**2


def test_barycentric_examples():
    ws = make_workspace(12)
    vals = np.sin(ws.mapped_nodes(-2.0, 1.0))
    for m in (0, 5, 12):
        assert barycentric_eval(vals, -2.0, 1.0, ws, ws.mapped_nodes(-2.0, 1.0)[m]) == vals[m]
    ws2 = make_workspace(2)
    assert barycentric_eval(ws2.nodes**2, -1, 1, ws2, 0.5) == pytest.approx(0.25, abs=1e-15)
    ws40 = make_workspace(40)
    runge = 1.0 / (1.0 + ws40.nodes**2)
    assert abs(barycentric_eval(runge, -1, 1, ws40, 0.3) - 1 / 1.09) <= 1e-12


def test_barycentric_refuses_extrapolation():
    ws = make_workspace(6)
    with pytest.raises(OutOfRangeError):
        barycentric_eval(np.ones(7), -1.0, 1.0, ws, 1.0 + 1e-9)
    with pytest.raises(OutOfRangeError):
        barycentric_eval(np.ones(7), 0.0, 1.0, ws, float("nan"))


def test_interpolation_matrix_slack_clamps():
    ws = make_workspace(6)
    B = interpolation_matrix([1.0 + 1e-14], -1.0, 1.0, ws, slack=1e-12)
    np.testing.assert_array_equal(B[0], np.eye(7)[0])


@given(N=st.integers(2, 40), seed=st.integers(0, 2**32 - 1))
def test_barycentric_reproduces_polynomials(N, seed):
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(N + 1) / np.arange(1, N + 2)
    ws = make_workspace(N)
    lo, hi = -0.5, 2.0
    t = ws.mapped_nodes(lo, hi)
    s = lambda y: (2 * y - (lo + hi)) / (hi - lo)  # noqa: E731
    vals = np.polynomial.chebyshev.chebval(s(t), coeffs)
    pts = rng.uniform(lo, hi, 100)
    direct = np.polynomial.chebyshev.chebval(s(pts), coeffs)
    assert np.abs(barycentric_eval(vals, lo, hi, ws, pts) - direct).max() <= 1e-12


def test_coefficient_examples():
    ws = make_workspace(8)
    c = chebyshev_coefficients(np.cos(3 * np.arccos(ws.nodes))).coeffs
    assert abs(c[3] - 1.0) <= 1e-14
    assert np.abs(np.delete(c, 3)).max() <= 1e-14
    c5 = chebyshev_coefficients(np.full(9, 5.0)).coeffs
    assert abs(c5[0] - 5.0) <= 1e-14 and np.abs(c5[1:]).max() <= 1e-14


def test_coefficients_of_exponential_against_bessel_series():
    # e^l = I_0(1) + 2 sum_n I_n(1) T_n(l)
    from scipy.special import iv

    ws = make_workspace(20)
    c = chebyshev_coefficients(np.exp(ws.nodes)).coeffs
    ref = 2.0 * iv(np.arange(21), 1.0)
    ref[0] /= 2
    np.testing.assert_allclose(c[:15], ref[:15], atol=1e-15)
    assert abs(c[20]) <= 1e-15


@given(N=st.integers(2, 120), seed=st.integers(0, 2**32 - 1))
def test_coefficient_round_trip(N, seed):
    vals = np.random.default_rng(seed).standard_normal(N + 1)
    back = chebyshev_values(chebyshev_coefficients(vals).coeffs)
    assert np.abs(back - vals).max() <= 1e-13 * np.abs(vals).max()
    assert chebyshev_coefficients(vals).N == N
    np.testing.assert_allclose(chebyshev_coefficients(vals).values(), vals, atol=1e-13 * np.abs(vals).max())


def test_resolution_indicator_examples():
    assert resolution_indicator(chebyshev_coefficients(np.zeros(11)), 3) == 0.0
    ws = make_workspace(10)
    tn = np.cos(10 * np.arccos(np.clip(ws.nodes, -1, 1)))
    assert resolution_indicator(chebyshev_coefficients(tn), 2) == pytest.approx(1.0, abs=1e-14)
    ws40 = make_workspace(40)
    assert resolution_indicator(chebyshev_coefficients(np.exp(ws40.nodes)), 5) <= 1e-14
    with pytest.raises(DimensionError):
        resolution_indicator(chebyshev_coefficients(np.ones(5)), 9)
