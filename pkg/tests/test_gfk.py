import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import geodesic_oracle
from glg.gfk import GfkError, GfkKernel, gfk_embed, gfk_kernel, kernel_from_bases, pca_basis, sqrt_psd


def random_domains(seed, r=6, N=50):
    rng = np.random.default_rng(seed)
    Xs = rng.standard_normal((N, r)) @ rng.standard_normal((r, r))
    Xt = rng.standard_normal((N + 7, r)) @ rng.standard_normal((r, r))
    return Xs, Xt


@pytest.mark.parametrize("seed", range(8))
def test_closed_form_matches_geodesic_quadrature(seed):
    Xs, Xt = random_domains(seed)
    d = 3
    Ps, Rs = pca_basis(Xs, d)
    Pt, _ = pca_basis(Xt, d)
    G = kernel_from_bases(Ps, Rs, Pt)
    oracle = geodesic_oracle(Ps, Pt)
    np.testing.assert_allclose(G, oracle, rtol=1e-6, atol=1e-6 * np.abs(oracle).max())


def test_endpoints_are_on_the_kernel_path():
    Xs, _ = random_domains(0)
    Ps, Rs = pca_basis(Xs, 2)
    # identical subspaces: the geodesic is constant, G = Ps Ps^T
    np.testing.assert_allclose(kernel_from_bases(Ps, Rs, Ps), Ps @ Ps.T, atol=1e-12)


@given(st.integers(0, 10_000), st.integers(2, 8))
def test_kernel_symmetric_psd(seed, r):
    Xs, Xt = random_domains(seed, r=r)
    kern = gfk_kernel(Xs, Xt)
    G = kern.G
    assert kern.subspace_dim == max(1, r // 2)
    np.testing.assert_allclose(G, G.T, atol=1e-14)
    assert np.linalg.eigvalsh(G).min() >= -1e-8


def test_embedding_reproduces_kernel_inner_products(rng):
    Xs, Xt = random_domains(3)
    kern = gfk_kernel(Xs, Xt)
    Z = gfk_embed(Xs, kern)
    np.testing.assert_allclose(Z @ Z.T, Xs @ kern.G @ Xs.T, rtol=1e-8, atol=1e-8)


def test_errors():
    Xs, Xt = random_domains(1, r=4)
    with pytest.raises(GfkError):
        gfk_kernel(Xs, Xt, d=3)
    with pytest.raises(GfkError):
        gfk_kernel(Xs, Xt[:, :3])
    with pytest.raises(GfkError):
        sqrt_psd(-np.eye(2))
    with pytest.raises(GfkError):
        gfk_embed(Xs[:, :3], gfk_kernel(Xs, Xt))


def test_single_feature_kernel():
    kern = gfk_kernel(np.arange(5.0)[:, None], np.arange(4.0)[:, None])
    assert kern.G.shape == (1, 1)
