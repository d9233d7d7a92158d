"""Binary C-SVM with an RBF kernel, trained by SMO.

The solver mirrors LIBSVM's C-SVC path: second-order working-set selection
(Fan, Chen & Lin, 2005), no shrinking, the full kernel matrix held in memory,
and the same stopping rule ``max_up(-y G) - min_low(-y G) < tol``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

TAU = 1e-12


def rbf_kernel(X: np.ndarray, Y: np.ndarray, gamma: float) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    sq = np.sum(X**2, axis=1)[:, None] + np.sum(Y**2, axis=1)[None, :] - 2.0 * X @ Y.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


@dataclass(frozen=True)
class SvmModel:
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i for the support vectors
    bias: float
    gamma: float
    C: float
    alpha: np.ndarray  # full dual vector over the training set
    n_iter: int

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.support_vectors.shape[1]:
            raise ValueError(
                f"model trained on {self.support_vectors.shape[1]} features, got {X.shape[1]}"
            )
        if len(self.dual_coef) == 0:
            return np.full(X.shape[0], self.bias)
        return rbf_kernel(X, self.support_vectors, self.gamma) @ self.dual_coef + self.bias


def dual_objective(alpha, y, K) -> float:
    """LIBSVM dual objective 1/2 a^T Q a - sum(a) with Q = yy^T * K."""
    ay = alpha * y
    return 0.5 * float(ay @ K @ ay) - float(np.sum(alpha))


def _solve_smo(K, y, C, tol, max_iter):
    n = len(y)
    alpha = np.zeros(n)
    G = -np.ones(n)
    QD = np.diag(K).copy()
    it = 0
    while it < max_iter:
        # -- working set selection (WSS2) --
        up = np.where(y > 0, alpha < C, alpha > 0)
        low = np.where(y > 0, alpha > 0, alpha < C)
        minus_yG = -y * G
        if not up.any() or not low.any():
            break
        cand = np.where(up, minus_yG, -np.inf)
        i = int(np.argmax(cand))
        Gmax = cand[i]
        Gmax2 = np.max(np.where(low, -minus_yG, -np.inf))
        if Gmax + Gmax2 < tol:
            break
        b = Gmax - minus_yG  # > 0 for useful j
        a = QD[i] + QD - 2.0 * K[i]
        a = np.where(a > 0, a, TAU)
        score = np.where(low & (b > 0), -(b * b) / a, np.inf)
        j = int(np.argmin(score))
        if not np.isfinite(score[j]):
            break

        # -- two-variable update (LIBSVM solver, equal box bounds) --
        ai_old, aj_old = alpha[i], alpha[j]
        Kij = K[i, j]
        if y[i] != y[j]:
            quad = QD[i] + QD[j] + 2.0 * Kij * (y[i] * y[j])
            quad = quad if quad > 0 else TAU
            delta = (-G[i] - G[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = diff
            elif alpha[i] < 0:
                alpha[i] = 0.0
                alpha[j] = -diff
            if diff > 0:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = C - diff
            elif alpha[j] > C:
                alpha[j] = C
                alpha[i] = C + diff
        else:
            quad = QD[i] + QD[j] - 2.0 * Kij
            quad = quad if quad > 0 else TAU
            delta = (G[i] - G[j]) / quad
            total = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if total > C:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = total - C
            elif alpha[j] < 0:
                alpha[j] = 0.0
                alpha[i] = total
            if total > C:
                if alpha[j] > C:
                    alpha[j] = C
                    alpha[i] = total - C
            elif alpha[i] < 0:
                alpha[i] = 0.0
                alpha[j] = total

        dai = alpha[i] - ai_old
        daj = alpha[j] - aj_old
        G += y * (K[:, i] * (y[i] * dai) + K[:, j] * (y[j] * daj))
        it += 1
    else:
        log.warning("SMO reached max_iter=%d before meeting tol=%g", max_iter, tol)
    return alpha, G, it


def _bias(alpha, G, y, C):
    yG = y * G
    at_ub = alpha >= C
    at_lb = alpha <= 0
    free = ~(at_ub | at_lb)
    if free.any():
        rho = float(np.mean(yG[free]))
    else:
        ub_mask = (at_ub & (y < 0)) | (at_lb & (y > 0))
        lb_mask = (at_ub & (y > 0)) | (at_lb & (y < 0))
        ub = np.min(yG[ub_mask]) if ub_mask.any() else np.inf
        lb = np.max(yG[lb_mask]) if lb_mask.any() else -np.inf
        rho = 0.5 * (ub + lb)
    return -rho


def svm_train(X, y, C: float = 1.0, gamma: float | None = None, tol: float = 1e-3, max_iter: int | None = None) -> SvmModel:
    """Train a C-SVM; ``gamma`` defaults to 1 / n_features as in LIBSVM."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y differ in length")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")
    if len(np.unique(y)) < 2:
        raise ValueError("training data contains a single class")
    if gamma is None:
        gamma = 1.0 / X.shape[1]
    if max_iter is None:
        max_iter = max(100_000, 100 * len(y))
    K = rbf_kernel(X, X, gamma)
    alpha, G, it = _solve_smo(K, y, C, tol, max_iter)
    sv = alpha > 0
    return SvmModel(
        support_vectors=X[sv],
        dual_coef=(alpha * y)[sv],
        bias=_bias(alpha, G, y, C),
        gamma=float(gamma),
        C=float(C),
        alpha=alpha,
        n_iter=it,
    )


def svm_predict(model: SvmModel, X) -> np.ndarray:
    """Labels in {-1, +1}; a zero decision value maps to +1."""
    return np.where(model.decision_function(X) >= 0, 1, -1)
