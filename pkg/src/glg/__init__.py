"""Heterogeneous unsupervised domain adaptation with linear monotonic maps.

Two domains with different feature counts are mapped to a common dimension by
strictly positive linear maps chosen to keep the principal-angle geometry
between their spanned subspaces, then aligned with a geodesic flow kernel so a
kernel SVM trained on the source can label the target.
"""

from .gfk import GfkKernel, gfk_embed, gfk_kernel
from .lmm import LmmPair, apply_lmm, random_lmm
from .optim import GlgConfig, adapt_glg, cost_j1, csa_init, fit_glg, grad_j1
from .subspace import domain_distance, pair_metric, principal_cosines, span_basis

__version__ = "0.1.0"

__all__ = [
    "GfkKernel",
    "GlgConfig",
    "LmmPair",
    "adapt_glg",
    "apply_lmm",
    "cost_j1",
    "csa_init",
    "domain_distance",
    "fit_glg",
    "gfk_embed",
    "gfk_kernel",
    "grad_j1",
    "pair_metric",
    "principal_cosines",
    "random_lmm",
    "span_basis",
]
