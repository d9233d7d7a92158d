"""Spanned subspaces and principal-angle distances.

A data matrix ``X`` (N x k, rows are instances) spans a subspace of R^N whose
orthonormal basis is given by the leading eigenvectors of ``X X^T``.  Two such
bases are compared through the singular values of ``A^T B``, i.e. the cosines
of the principal angles between the subspaces.
"""

from __future__ import annotations

import warnings

import numpy as np


class DimensionError(ValueError):
    """Raised when array shapes are incompatible with the requested operation."""


class DegeneracyWarning(UserWarning):
    """Emitted when a data matrix has lower numerical rank than requested."""


def normalize_signs(vecs: np.ndarray) -> np.ndarray:
    """Flip columns so the first entry of largest magnitude is positive."""
    vecs = np.array(vecs, dtype=float, copy=True)
    if vecs.size == 0:
        return vecs
    idx = np.argmax(np.abs(vecs), axis=-2)
    picked = np.take_along_axis(vecs, idx[..., None, :], axis=-2)
    signs = np.where(picked < 0, -1.0, 1.0)
    return vecs * signs


def _rank_tol(s: np.ndarray, shape) -> float:
    if s.size == 0:
        return 0.0
    return max(shape) * np.finfo(float).eps * float(s[0])


def top_eigenpairs(X: np.ndarray, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Leading ``dim`` eigenpairs of ``X @ X.T`` in descending order.

    The eigenpairs are read off the thin SVD of ``X`` (``XX^T = U S^2 U^T``),
    which avoids forming the N x N matrix.  When ``X`` has numerical rank
    below ``dim`` the remaining columns are completed from the zero eigenspace
    of ``XX^T`` and a :class:`DegeneracyWarning` is emitted.

    Returns
    -------
    vals : ndarray, shape (dim,)
    vecs : ndarray, shape (N, dim), orthonormal and sign-normalized
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {X.shape}")
    N = X.shape[0]
    if dim < 1 or dim > N:
        raise DimensionError(f"cannot span {dim} dimensions in R^{N}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix contains non-finite entries")

    U, s, _ = np.linalg.svd(X, full_matrices=False)
    rank = int(np.sum(s > _rank_tol(s, X.shape)))
    if rank >= dim:
        return s[:dim] ** 2, normalize_signs(U[:, :dim])

    warnings.warn(
        f"numerical rank {rank} < requested dimension {dim}; "
        "completing basis from the zero eigenspace",
        DegeneracyWarning,
        stacklevel=2,
    )
    # Complete deterministically: eigenvectors of the projector onto the
    # orthogonal complement of the range.
    Y = U[:, :rank]
    comp = np.eye(N) - Y @ Y.T
    w, V = np.linalg.eigh(comp)
    order = np.argsort(-w, kind="stable")
    extra = V[:, order[: dim - rank]]
    vals = np.concatenate([s[:rank] ** 2, np.zeros(dim - rank)])
    vecs = np.concatenate([Y, extra], axis=1)
    return vals, normalize_signs(vecs)


def span_basis(X: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Orthonormal basis (N x dim) of the subspace spanned by the columns of X."""
    X = np.asarray(X, dtype=float)
    if dim is None:
        dim = X.shape[1]
    return top_eigenpairs(X, dim)[1]


def principal_cosines(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Cosines of the principal angles between span(A) and span(B).

    ``A`` and ``B`` must have orthonormal columns and the same number of rows.
    The result has ``min(A.shape[1], B.shape[1])`` entries, sorted
    non-increasing and clamped to [0, 1].
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape[0] != B.shape[0]:
        raise DimensionError(f"ambient dimensions differ: {A.shape[0]} vs {B.shape[0]}")
    s = np.linalg.svd(A.T @ B, compute_uv=False)
    return np.clip(s, 0.0, 1.0)


def domain_distance(Xs: np.ndarray, Xt: np.ndarray) -> np.ndarray:
    """Principal cosines between the column spaces of two data matrices."""
    Xs = np.asarray(Xs, dtype=float)
    Xt = np.asarray(Xt, dtype=float)
    if Xs.shape[0] != Xt.shape[0]:
        raise DimensionError(f"row counts differ: {Xs.shape[0]} vs {Xt.shape[0]}")
    return principal_cosines(span_basis(Xs), span_basis(Xt))


def pair_metric(d1, d2) -> float:
    """l1 distance between two principal-cosine vectors of equal length."""
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    if d1.shape != d2.shape:
        raise DimensionError(f"distance vectors differ in length: {d1.shape} vs {d2.shape}")
    return float(np.sum(np.abs(d1 - d2)))
