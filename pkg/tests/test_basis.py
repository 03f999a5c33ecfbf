import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fdband.basis import FourierBasis, design_matrix, eval_basis

W = 2 * math.pi / 365


def test_basis_validation():
    for bad in (0, 2, -1, 4):
        with pytest.raises(ValueError):
            FourierBasis(bad)
    with pytest.raises(ValueError):
        FourierBasis(3, omega=0)
    b = FourierBasis.with_period(5, 100.0)
    assert b.period == pytest.approx(100.0, rel=1e-15)


def test_known_values():
    b = FourierBasis(21)
    assert eval_basis(b, 123.4, 1) == 1.0
    assert eval_basis(b, 0.0, 2) == 0.0
    assert eval_basis(b, 0.0, 3, deriv=1) == 0.0
    assert eval_basis(b, 10.0, 4) == pytest.approx(math.sin(2 * W * 10))
    assert eval_basis(b, 10.0, 5) == pytest.approx(math.cos(2 * W * 10))


def test_errors():
    b = FourierBasis(5)
    with pytest.raises(IndexError):
        eval_basis(b, 1.0, 6)
    with pytest.raises(IndexError):
        eval_basis(b, 1.0, 0)
    with pytest.raises(ValueError):
        eval_basis(b, 1.0, 2, deriv=3)
    with pytest.raises(ValueError):
        design_matrix(b, [])


@settings(max_examples=200, deadline=None)
@given(k=st.integers(1, 21), t=st.floats(-400, 800), order=st.sampled_from([1, 2]))
def test_derivatives_match_finite_differences(k, t, order):
    b = FourierBasis(21)
    h = 1e-4
    fd = (eval_basis(b, t + h, k, order - 1) - eval_basis(b, t - h, k, order - 1)) / (2 * h)
    exact = eval_basis(b, t, k, order)
    # relative to the derivative's amplitude (m*omega)**order
    scale = max(((k // 2) * W) ** order, 1e-300)
    assert abs(fd - exact) <= 1e-6 * scale


@settings(max_examples=200, deadline=None)
@given(k=st.integers(1, 21), t=st.floats(-400, 800))
def test_periodicity(k, t):
    b = FourierBasis(21)
    assert abs(eval_basis(b, t + b.period, k) - eval_basis(b, t, k)) <= 1e-10


def test_design_matrix_small_cases():
    np.testing.assert_array_equal(design_matrix(FourierBasis(1), [1, 2, 3]), np.ones((3, 1)))
    np.testing.assert_array_equal(design_matrix(FourierBasis(3), [0.0]), [[1.0, 0.0, 1.0]])
    d1 = design_matrix(FourierBasis(5), [1.0, 7.0], deriv=1)
    assert np.all(d1[:, 0] == 0)


def test_design_matrix_matches_eval_basis():
    b = FourierBasis(9, omega=0.3)
    grid = np.linspace(-3, 40, 17)
    for deriv in (0, 1, 2):
        X = design_matrix(b, grid, deriv)
        ref = [[eval_basis(b, t, k, deriv) for k in range(1, 10)] for t in grid]
        np.testing.assert_allclose(X, ref, rtol=1e-13, atol=1e-13)


def _sum_sin(a, n):
    # closed form of sum_{t=1}^{n} sin(a t)
    return math.sin(n * a / 2) * math.sin((n + 1) * a / 2) / math.sin(a / 2)


def _sum_cos(a, n):
    return math.sin(n * a / 2) * math.cos((n + 1) * a / 2) / math.sin(a / 2)


def test_column_sums_against_closed_form():
    X = design_matrix(FourierBasis(21), np.arange(1, 366))
    for k in range(2, 22):
        a = (k // 2) * W
        expected = _sum_sin(a, 365) if k % 2 == 0 else _sum_cos(a, 365)
        assert abs(X[:, k - 1].sum() - expected) <= 1e-9


def test_discrete_orthogonality():
    X = design_matrix(FourierBasis(51), np.arange(1, 366))
    G = X.T @ X
    diag = np.diag(G)
    off = G - np.diag(diag)
    assert np.max(np.abs(off) / np.sqrt(np.outer(diag, diag))) <= 1e-8
