import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glg.eds import (
    DegenerateSpectrumError,
    dxxt_dx,
    eig_derivative,
    eig_jacobian,
    fd_check_eig,
    full_eigenpairs,
)


def test_dxxt_matches_finite_difference(rng):
    X = rng.standard_normal((5, 3))
    h = 1e-6
    for a, b in [(0, 0), (4, 2), (2, 1)]:
        Xp = X.copy()
        Xp[a, b] += h
        fd = (Xp @ Xp.T - X @ X.T) / h
        np.testing.assert_allclose(dxxt_dx(X, a, b), fd, atol=1e-5)
    with pytest.raises(IndexError):
        dxxt_dx(X, 5, 0)


@given(st.integers(0, 5000))
def test_jacobian_agrees_with_single_entry_derivative(seed):
    X = np.random.default_rng(seed).standard_normal((5, 3))
    vals, _ = full_eigenpairs(X)
    i = 0
    d_vec, d_val = eig_jacobian(X, i)
    for a, b in [(0, 0), (3, 2)]:
        one = eig_derivative(X, i, a, b)
        np.testing.assert_allclose(d_vec[:, a, b], one.d_eigvec, atol=1e-10)
        assert d_val[a, b] == pytest.approx(one.d_eigval, abs=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_against_central_differences(seed):
    X = np.random.default_rng(seed).standard_normal((6, 3))
    for i in range(3):
        assert fd_check_eig(X, i) < 1e-4


def test_eigenvector_derivative_is_orthogonal_to_eigenvector(rng):
    X = rng.standard_normal((6, 2))
    _, V = full_eigenpairs(X)
    d_vec, _ = eig_jacobian(X, 1)
    assert np.max(np.abs(np.einsum("k,kab->ab", V[:, 1], d_vec))) < 1e-10


def test_repeated_eigenvalue_raises():
    X = np.eye(4)[:, :2]  # X X^T has eigenvalue 1 twice
    with pytest.raises(DegenerateSpectrumError):
        eig_derivative(X, 0, 0, 0)
