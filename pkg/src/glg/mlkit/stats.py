"""Preprocessing, accuracy, k-fold evaluation and the MMD two-sample test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .svm import rbf_kernel, svm_predict, svm_train


def zscore(X: np.ndarray) -> np.ndarray:
    """Center columns and scale to unit sample std; constant columns become 0."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 2:
        raise ValueError("zscore needs at least two rows")
    mu = X.mean(axis=0)
    sd = X.std(axis=0, ddof=1)
    Z = X - mu
    const = sd <= np.finfo(float).eps * np.maximum(np.abs(mu), 1.0)
    Z[:, const] = 0.0
    Z[:, ~const] /= sd[~const]
    return Z


def accuracy(pred, truth) -> float:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ValueError("empty label vectors")
    return float(np.mean(pred == truth))


def stratified_folds(y, k: int, seed) -> list[np.ndarray]:
    """Split indices into k folds with classes spread evenly."""
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(k)]
    offset = 0
    for label in np.unique(y):
        idx = rng.permutation(np.flatnonzero(y == label))
        if len(idx) < k:
            raise ValueError(f"class {label} has {len(idx)} members, fewer than {k} folds")
        for pos, i in enumerate(idx):
            folds[(pos + offset) % k].append(i)
        offset += len(idx)
    return [np.sort(np.array(f, dtype=int)) for f in folds]


def kfold_accuracy(X, y, k: int = 5, seed=0, **svm_kw) -> tuple[float, float]:
    """Mean and std of held-out SVM accuracy over stratified k folds."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    accs = []
    for fold in stratified_folds(y, k, seed):
        train = np.ones(len(y), dtype=bool)
        train[fold] = False
        model = svm_train(X[train], y[train], **svm_kw)
        accs.append(accuracy(svm_predict(model, X[fold]), y[fold]))
    return float(np.mean(accs)), float(np.std(accs))


# -- MMD ------------------------------------------------------------------------


def _mmd2_from_kernel(K, a):
    """Unbiased MMD^2 for each row of the boolean membership matrix ``a``."""
    a = np.atleast_2d(a).astype(float)
    b = 1.0 - a
    m = a.sum(axis=1)
    n = b.sum(axis=1)
    Ka = a @ K
    diag = np.diag(K)
    kxx = (np.sum(Ka * a, axis=1) - a @ diag) / (m * (m - 1))
    kyy = (np.sum((b @ K) * b, axis=1) - b @ diag) / (n * (n - 1))
    kxy = np.sum(Ka * b, axis=1) / (m * n)
    return kxx + kyy - 2.0 * kxy


def mmd2_unbiased(X, Y, gamma: float) -> float:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    Z = np.vstack([X, Y])
    a = np.zeros(len(Z), dtype=bool)
    a[: len(X)] = True
    return float(_mmd2_from_kernel(rbf_kernel(Z, Z, gamma), a)[0])


@dataclass(frozen=True)
class MmdResult:
    statistic: float
    threshold: float
    p_value: float
    same_distribution: bool

    @property
    def verdict(self) -> str:
        return "Yes" if self.same_distribution else "No"


def mmd2_test(X, Y, gamma: float, permutations: int = 1000, alpha: float = 0.05, seed=0) -> MmdResult:
    """Permutation two-sample test on the unbiased MMD^2 statistic (RBF kernel)."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if len(X) < 2 or len(Y) < 2:
        raise ValueError("each sample needs at least two points")
    # Canonical order so the test is symmetric in its arguments.
    if (len(Y), Y.tobytes()) < (len(X), X.tobytes()):
        X, Y = Y, X
    Z = np.vstack([X, Y])
    K = rbf_kernel(Z, Z, gamma)
    m = len(X)
    a = np.zeros(len(Z), dtype=bool)
    a[:m] = True
    stat = float(_mmd2_from_kernel(K, a)[0])

    rng = np.random.default_rng(seed)
    null = []
    batch = 100
    for start in range(0, permutations, batch):
        size = min(batch, permutations - start)
        perms = np.argsort(rng.random((size, len(Z))), axis=1)
        member = perms < m
        null.append(_mmd2_from_kernel(K, member))
    null = np.concatenate(null)
    threshold = float(np.quantile(null, 1.0 - alpha))
    p_value = float((1 + np.sum(null >= stat)) / (1 + permutations))
    return MmdResult(statistic=stat, threshold=threshold, p_value=p_value, same_distribution=p_value > alpha)
