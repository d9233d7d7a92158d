"""Linear monotonic maps ``x -> x U^T`` with strictly positive ``U``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS_POS = 1e-6


@dataclass(frozen=True)
class LmmPair:
    """Source map ``Us`` (r x m) and target map ``Ut`` (r x n) with r = min(m, n)."""

    Us: np.ndarray
    Ut: np.ndarray

    def __post_init__(self):
        Us = np.asarray(self.Us, dtype=float)
        Ut = np.asarray(self.Ut, dtype=float)
        if Us.ndim != 2 or Ut.ndim != 2 or Us.shape[0] != Ut.shape[0]:
            raise ValueError(f"incompatible map shapes {Us.shape} and {Ut.shape}")
        if Us.shape[0] != min(Us.shape[1], Ut.shape[1]):
            raise ValueError(f"maps must have min(m, n) rows, got {Us.shape[0]}")
        object.__setattr__(self, "Us", Us)
        object.__setattr__(self, "Ut", Ut)

    @property
    def r(self) -> int:
        return self.Us.shape[0]

    def is_monotonic(self, floor: float = EPS_POS) -> bool:
        return bool(np.all(self.Us >= floor) and np.all(self.Ut >= floor))

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.Us.ravel(), self.Ut.ravel()])

    @classmethod
    def unflatten(cls, vec, m: int, n: int) -> "LmmPair":
        r = min(m, n)
        vec = np.asarray(vec, dtype=float)
        return cls(vec[: r * m].reshape(r, m), vec[r * m :].reshape(r, n))

    @classmethod
    def identity(cls, m: int) -> "LmmPair":
        """Identity pair for equal dimensions (not strictly positive off-diagonal)."""
        return cls(np.eye(m), np.eye(m))


def apply_lmm(X: np.ndarray, U: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    U = np.asarray(U, dtype=float)
    if X.shape[-1] != U.shape[1]:
        raise ValueError(f"map expects {U.shape[1]} features, data has {X.shape[-1]}")
    return X @ U.T


def random_lmm(r: int, m: int, seed, eps_pos: float = EPS_POS) -> np.ndarray:
    """Entries i.i.d. uniform on (eps_pos, 1]."""
    rng = np.random.default_rng(seed)
    return 1.0 - rng.random((r, m)) * (1.0 - eps_pos)


def random_linear_map(r: int, m: int, seed) -> np.ndarray:
    """Sign-unconstrained standard normal map (the RMG contrast case)."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal((r, m))


def project_positive(U: np.ndarray, floor: float = EPS_POS) -> np.ndarray:
    if floor <= 0:
        raise ValueError("floor must be positive")
    return np.maximum(np.asarray(U, dtype=float), floor)
