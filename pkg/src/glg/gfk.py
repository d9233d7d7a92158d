"""Geodesic flow kernel (Gong et al., 2012) and the embedding it induces.

Given d-dimensional principal-component bases ``Ps`` and ``Pt`` of two
r-dimensional domains, the geodesic ``Phi(t)`` on the Grassmannian from
``Ps`` (t=0) to ``Pt`` (t=1) is integrated in closed form::

    G = int_0^1 Phi(t) Phi(t)^T dt
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .subspace import normalize_signs

SERIES_BELOW = 1e-4
PSD_SLACK = 1e-8


class GfkError(ValueError):
    pass


@dataclass(frozen=True)
class GfkKernel:
    G: np.ndarray
    subspace_dim: int


def default_subspace_dim(r: int) -> int:
    return max(1, r // 2)


def pca_basis(X: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Top-d principal directions of X (columns) and their orthogonal complement."""
    X = np.asarray(X, dtype=float)
    Xc = X - X.mean(axis=0)
    _, s, Vt = np.linalg.svd(Xc, full_matrices=True)
    tol = max(Xc.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    if np.sum(s > tol) < d:
        raise GfkError(f"data has rank {int(np.sum(s > tol))}, cannot extract {d} components")
    V = normalize_signs(Vt.T)
    return V[:, :d], V[:, d:]


def _geodesic_weights(theta):
    small = theta < SERIES_BELOW
    t = np.where(small, 1.0, theta)
    sinc2 = np.where(small, 1.0 - 2.0 * theta**2 / 3.0, np.sin(2 * t) / (2 * t))
    cross = np.where(small, -theta / 2.0 + theta**3 / 6.0, (np.cos(2 * t) - 1.0) / (4 * t))
    return 0.5 * (1.0 + sinc2), cross, 0.5 * (1.0 - sinc2)


def _orthonormal_columns(W, min_norm=1e-12):
    """Normalize the (mutually orthogonal) columns of W, completing null ones."""
    rows, cols = W.shape
    out = np.zeros_like(W)
    norms = np.linalg.norm(W, axis=0)
    for j in range(cols):
        if norms[j] > min_norm:
            out[:, j] = W[:, j] / norms[j]
    for j in np.flatnonzero(norms <= min_norm):
        for e in np.eye(rows):
            v = e - out @ (out.T @ e)
            if np.linalg.norm(v) > 1e-6:
                out[:, j] = v / np.linalg.norm(v)
                break
    return out


def kernel_from_bases(Ps: np.ndarray, Rs: np.ndarray, Pt: np.ndarray) -> np.ndarray:
    """Closed-form GFK from a source basis, its complement and a target basis."""
    d = Ps.shape[1]
    if Rs.shape[1] < d:
        raise GfkError(f"subspace dimension {d} exceeds half the feature dimension")
    U1, cos_t, Vt = np.linalg.svd(Ps.T @ Pt)
    V = Vt.T
    W = -(Rs.T @ Pt) @ V
    sin_t = np.linalg.norm(W, axis=0)
    theta = np.arctan2(sin_t, np.clip(cos_t, 0.0, 1.0))
    U2 = _orthonormal_columns(W)
    b1, b2, b4 = _geodesic_weights(theta)
    Omega = np.hstack([Ps @ U1, Rs @ U2])
    mid = np.block([[np.diag(b1), np.diag(b2)], [np.diag(b2), np.diag(b4)]])
    G = Omega @ mid @ Omega.T
    return 0.5 * (G + G.T)


def gfk_kernel(Xs_ho: np.ndarray, Xt_ho: np.ndarray, d: int | None = None) -> GfkKernel:
    """Geodesic flow kernel between two zscored domains sharing r features."""
    Xs_ho = np.asarray(Xs_ho, dtype=float)
    Xt_ho = np.asarray(Xt_ho, dtype=float)
    r = Xs_ho.shape[1]
    if Xt_ho.shape[1] != r:
        raise GfkError(f"feature counts differ: {r} vs {Xt_ho.shape[1]}")
    if d is None:
        d = default_subspace_dim(r)
    if not 1 <= d <= r // 2 and not (r == 1 and d == 1):
        raise GfkError(f"subspace dimension {d} must lie in [1, {r // 2}]")
    if r == 1:
        # Single feature: both subspaces are the whole line.
        return GfkKernel(G=np.ones((1, 1)), subspace_dim=1)
    Ps, Rs = pca_basis(Xs_ho, d)
    Pt, _ = pca_basis(Xt_ho, d)
    return GfkKernel(G=kernel_from_bases(Ps, Rs, Pt), subspace_dim=d)


def sqrt_psd(G: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(0.5 * (G + G.T))
    if w.min() < -PSD_SLACK:
        raise GfkError(f"kernel is not positive semidefinite (min eigenvalue {w.min():.3g})")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T


def gfk_embed(X: np.ndarray, kern: GfkKernel) -> np.ndarray:
    """Map rows so that ordinary dot products equal ``x^T G y``."""
    X = np.asarray(X, dtype=float)
    if X.shape[1] != kern.G.shape[0]:
        raise GfkError(f"data has {X.shape[1]} features, kernel expects {kern.G.shape[0]}")
    return X @ sqrt_psd(kern.G)
