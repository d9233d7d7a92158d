"""First-order perturbation of the eigenpairs of ``X X^T``.

For a simple eigenpair ``(lam_i, y_i)`` of ``S = X X^T`` and a perturbation of
the single entry ``X[a, b]``::

    dS       = J_ab X^T + X J_ab^T
    dlam_i   = y_i^T dS y_i
    dy_i     = -(S - lam_i I)^+ dS y_i

where ``(S - lam_i I)^+`` is the Moore-Penrose pseudoinverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .subspace import normalize_signs

GAP_TOL = 1e-8
PINV_CUTOFF = 1e-10


class DegenerateSpectrumError(ArithmeticError):
    """An eigenvalue is (numerically) repeated, so its eigenvector is not differentiable."""


@dataclass(frozen=True)
class EigDerivative:
    d_eigvec: np.ndarray  # (N,)
    d_eigval: float


def full_eigenpairs(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All N eigenpairs of ``X X^T``, descending, sign-normalized."""
    X = np.asarray(X, dtype=float)
    w, V = np.linalg.eigh(X @ X.T)
    order = np.argsort(-w, kind="stable")
    return w[order], normalize_signs(V[:, order])


def dxxt_dx(X: np.ndarray, a: int, b: int) -> np.ndarray:
    """Derivative of ``X X^T`` with respect to the entry ``X[a, b]``."""
    X = np.asarray(X, dtype=float)
    N, n = X.shape
    if not (0 <= a < N and 0 <= b < n):
        raise IndexError(f"entry ({a}, {b}) outside a {N}x{n} matrix")
    # J_ab X^T has row a equal to X[:, b]; X J_ab^T is its transpose.
    out = np.zeros((N, N))
    out[a, :] += X[:, b]
    out[:, a] += X[:, b]
    return out


def spectral_gap(vals: np.ndarray, i: int) -> float:
    others = np.delete(vals, i)
    if others.size == 0:
        return np.inf
    return float(np.min(np.abs(others - vals[i])))


def shifted_pinv(vals: np.ndarray, vecs: np.ndarray, i: int) -> np.ndarray:
    """``(S - vals[i] I)^+`` from a full eigendecomposition of S."""
    diff = vals - vals[i]
    cutoff = PINV_CUTOFF * max(float(np.max(np.abs(vals))), 1.0)
    inv = np.zeros_like(diff)
    keep = np.abs(diff) > cutoff
    inv[keep] = 1.0 / diff[keep]
    return (vecs * inv) @ vecs.T


def _check_gap(vals, i):
    if not 0 <= i < len(vals):
        raise IndexError(f"eigenpair index {i} out of range")
    gap = spectral_gap(vals, i)
    if gap <= GAP_TOL:
        raise DegenerateSpectrumError(f"eigenvalue {i} has spectral gap {gap:.3g}")


def eig_derivative(X: np.ndarray, i: int, a: int, b: int) -> EigDerivative:
    """Derivatives of the i-th eigenpair of ``X X^T`` with respect to ``X[a, b]``."""
    X = np.asarray(X, dtype=float)
    vals, vecs = full_eigenpairs(X)
    _check_gap(vals, i)
    y = vecs[:, i]
    dS = dxxt_dx(X, a, b)
    dy = -shifted_pinv(vals, vecs, i) @ (dS @ y)
    return EigDerivative(d_eigvec=dy, d_eigval=float(y @ dS @ y))


def eig_jacobian(X: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Derivatives for every entry of X at once.

    Returns ``(d_vec, d_val)`` with shapes (N, N, n) and (N, n); ``d_vec[:, a, b]``
    is the derivative of the eigenvector with respect to ``X[a, b]``.
    """
    X = np.asarray(X, dtype=float)
    N, n = X.shape
    vals, vecs = full_eigenpairs(X)
    _check_gap(vals, i)
    y = vecs[:, i]
    P = shifted_pinv(vals, vecs, i)
    # dS y = e_a (X[:, b] . y) + X[:, b] y_a
    Xty = X.T @ y  # (n,)
    d_vec = -(P[:, :, None] * Xty[None, None, :] + (P @ X)[:, None, :] * y[None, :, None])
    d_val = 2.0 * np.outer(y, Xty)
    return d_vec, d_val


def _aligned(vec, ref):
    k = int(np.argmax(np.abs(ref)))
    return vec if np.sign(vec[k]) == np.sign(ref[k]) else -vec


def fd_check_eig(X: np.ndarray, i: int, step: float = 1e-5, floor: float = 1e-6) -> float:
    """Largest relative discrepancy between analytic and central-difference derivatives.

    Each entry ``(a, b)`` is scored as ``|analytic - fd| / max(|analytic|, |fd|, floor)``
    using the Euclidean norm over the stacked (eigenvector, eigenvalue) derivative.
    """
    X = np.asarray(X, dtype=float)
    N, n = X.shape
    d_vec, d_val = eig_jacobian(X, i)
    vals, vecs = full_eigenpairs(X)
    ref = vecs[:, i]
    worst = 0.0
    for a in range(N):
        for b in range(n):
            Xp = X.copy()
            Xm = X.copy()
            Xp[a, b] += step
            Xm[a, b] -= step
            wp, Vp = full_eigenpairs(Xp)
            wm, Vm = full_eigenpairs(Xm)
            fd_vec = (_aligned(Vp[:, i], ref) - _aligned(Vm[:, i], ref)) / (2 * step)
            fd_val = (wp[i] - wm[i]) / (2 * step)
            an = np.append(d_vec[:, a, b], d_val[a, b])
            fd = np.append(fd_vec, fd_val)
            scale = max(np.linalg.norm(an), np.linalg.norm(fd), floor)
            worst = max(worst, float(np.linalg.norm(an - fd) / scale))
    return worst
