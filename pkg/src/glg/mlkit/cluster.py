"""Two-cluster k-means (Lloyd) used by the clustering baseline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KMeansResult:
    assignment: np.ndarray  # cluster index per row, in {0, 1}
    label_map: tuple  # label given to cluster 0 and cluster 1
    centers: np.ndarray
    objective: list  # within-cluster sum of squares after each assignment step

    @property
    def labels(self) -> np.ndarray:
        return np.asarray(self.label_map)[self.assignment]


def _sse(X, centers, assign):
    return float(np.sum((X - centers[assign]) ** 2))


def kmeans2(X, seed, max_iter: int = 300) -> KMeansResult:
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 2:
        raise ValueError("need at least two rows")
    rng = np.random.default_rng(seed)
    centers = X[rng.choice(X.shape[0], 2, replace=False)].copy()
    assign = None
    history = []
    for _ in range(max_iter):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new = np.argmin(d2, axis=1)
        for c in range(2):
            if not np.any(new == c):
                # Re-seed an empty cluster at the point farthest from its center.
                far = int(np.argmax(d2[np.arange(len(X)), new]))
                new[far] = c
        history.append(_sse(X, centers, new))
        if assign is not None and np.array_equal(new, assign):
            break
        assign = new
        centers = np.array([X[assign == c].mean(axis=0) for c in range(2)])
        history.append(_sse(X, centers, assign))
    label_map = (1, -1) if rng.random() < 0.5 else (-1, 1)
    return KMeansResult(assignment=assign, label_map=label_map, centers=centers, objective=history)
