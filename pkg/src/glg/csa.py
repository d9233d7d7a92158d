"""Cuckoo search with Levy flights (Yang & Deb, 2009).

Follows the layout of the authors' reference MATLAB code: a Levy-flight move
of every nest relative to the current best, greedy replacement, then a
fraction ``discovery`` of solution components is rebuilt from differences of
two random permutations of the population.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gamma, pi, sin

import numpy as np


@dataclass
class CuckooResult:
    best: np.ndarray
    fbest: float
    history: list = field(default_factory=list)  # best value after each iteration
    evaluations: int = 0


def levy_sigma(beta: float) -> float:
    num = gamma(1 + beta) * sin(pi * beta / 2)
    den = gamma((1 + beta) / 2) * beta * 2 ** ((beta - 1) / 2)
    return (num / den) ** (1 / beta)


def cuckoo_search(
    objective,
    lower,
    upper,
    n_nests: int = 25,
    discovery: float = 0.25,
    n_iter: int = 100,
    rng=None,
    beta: float = 1.5,
    step_scale: float = 0.01,
) -> CuckooResult:
    """Minimize ``objective`` over the box ``[lower, upper]``."""
    rng = np.random.default_rng(rng)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    dim = lower.shape[0]
    sigma = levy_sigma(beta)

    nests = lower + (upper - lower) * rng.random((n_nests, dim))
    fitness = np.array([objective(x) for x in nests])
    evals = n_nests
    k = int(np.argmin(fitness))
    best, fbest = nests[k].copy(), float(fitness[k])
    history = []

    def keep_better(candidates):
        nonlocal evals
        f_new = np.array([objective(x) for x in candidates])
        evals += len(candidates)
        better = f_new <= fitness
        nests[better] = candidates[better]
        fitness[better] = f_new[better]

    for _ in range(n_iter):
        # Levy flights around the current best
        u = rng.standard_normal((n_nests, dim)) * sigma
        v = rng.standard_normal((n_nests, dim))
        step = u / np.abs(v) ** (1 / beta)
        moved = nests + step_scale * step * (nests - best) * rng.standard_normal((n_nests, dim))
        keep_better(np.clip(moved, lower, upper))

        # Discovery: abandon a fraction of components
        mask = rng.random((n_nests, dim)) > discovery
        scale = rng.random()
        diff = nests[rng.permutation(n_nests)] - nests[rng.permutation(n_nests)]
        keep_better(np.clip(nests + scale * diff * mask, lower, upper))

        k = int(np.argmin(fitness))
        if fitness[k] < fbest:
            best, fbest = nests[k].copy(), float(fitness[k])
        history.append(fbest)

    return CuckooResult(best=best, fbest=fbest, history=history, evaluations=evals)
