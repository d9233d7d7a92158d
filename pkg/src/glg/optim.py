"""Learning linear monotonic maps that preserve principal-angle geometry.

The objective integrates, over a uniform shift ``delta`` in ``[0, delta0]``
applied to every entry of both data matrices, the l1 gap between

* the principal cosines of ``span(Xs + delta)`` vs ``span(Xt + delta)``, and
* the principal cosines of ``span((Xs + delta) Us^T)`` vs ``span((Xt + delta) Ut^T)``,

plus ridge penalties on the maps.  The gradient follows the eigenvector
perturbation formula in :mod:`glg.eds`, assembled in adjoint form so one
pass per quadrature node covers every entry of ``Us`` and ``Ut``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .csa import cuckoo_search
from .eds import GAP_TOL, DegenerateSpectrumError
from .lmm import LmmPair, apply_lmm, project_positive
from .subspace import DimensionError, principal_cosines, top_eigenpairs

log = logging.getLogger(__name__)

RETRY_SHIFT = 1e-9
TIE_TOL = 1e-12  # cosine gaps this small count as l1 ties (subgradient 0)


@dataclass(frozen=True)
class GlgConfig:
    delta0: float = 0.01
    panels: int = 10
    max_iter: int = 100
    err_tol: float = 1e-5
    eta_grid: tuple = (0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 5.0, 20.0)
    lambda_s: float | None = None  # None: 0.01 / (m r), 0 when m == n
    lambda_t: float | None = None
    csa_nests: int = 30
    csa_discovery: float = 0.25
    csa_iters: int = 100
    csa_bounds: tuple = (0.0, 1.0)
    seed: int = 0
    eps_pos: float = 1e-6
    span_cap: int = 600

    def __post_init__(self):
        if self.delta0 <= 0:
            raise ValueError("delta0 must be positive")
        if self.panels < 1:
            raise ValueError("panels must be at least 1")
        object.__setattr__(self, "eta_grid", tuple(float(e) for e in self.eta_grid))
        object.__setattr__(self, "csa_bounds", tuple(float(b) for b in self.csa_bounds))

    def regularization(self, m: int, n: int) -> tuple[float, float]:
        if m == n:
            auto = (0.0, 0.0)
        else:
            r = min(m, n)
            auto = (0.01 / (m * r), 0.01 / (n * r))
        ls = auto[0] if self.lambda_s is None else self.lambda_s
        lt = auto[1] if self.lambda_t is None else self.lambda_t
        return ls, lt


@dataclass
class FitTrace:
    records: list = field(default_factory=list)
    reason: str = ""
    csa_history: list = field(default_factory=list)
    reinitialized: bool = False

    @property
    def j1(self) -> list:
        return [rec["j1"] for rec in self.records]


# -- quadrature ---------------------------------------------------------------


def simpson_nodes(lo: float, hi: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Simpson's rule with ``panels`` subintervals.

    Each subinterval of width ``h`` contributes ``h/6 (f(a) + 4 f(a + h/2) + f(a + h))``.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if panels < 1:
        raise ValueError("panels must be at least 1")
    h = (hi - lo) / panels
    nodes = lo + 0.5 * h * np.arange(2 * panels + 1)
    weights = np.full(2 * panels + 1, 2.0)
    weights[1::2] = 4.0
    weights[0] = weights[-1] = 1.0
    return nodes, weights * h / 6.0


def simpson_integrate(f, lo: float, hi: float, panels: int) -> float:
    nodes, weights = simpson_nodes(lo, hi, panels)
    vals = np.array([f(x) for x in nodes], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("integrand returned a non-finite value")
    return float(weights @ vals)


# -- objective ----------------------------------------------------------------


def _check_pair(Xs, Xt, maps=None):
    Xs = np.asarray(Xs, dtype=float)
    Xt = np.asarray(Xt, dtype=float)
    if Xs.shape[0] != Xt.shape[0]:
        raise DimensionError(f"domains must share the row count, got {Xs.shape[0]} and {Xt.shape[0]}")
    if maps is not None:
        r = min(Xs.shape[1], Xt.shape[1])
        if maps.Us.shape != (r, Xs.shape[1]) or maps.Ut.shape != (r, Xt.shape[1]):
            raise DimensionError("map shapes do not match the data dimensions")
    return Xs, Xt


class J1Problem:
    """Cost and gradient of the geometry-consistency objective for fixed data.

    The original-space principal cosines do not depend on the maps and are
    cached per quadrature node.
    """

    def __init__(self, Xs, Xt, cfg: GlgConfig = GlgConfig()):
        self.Xs, self.Xt = _check_pair(Xs, Xt)
        self.cfg = cfg
        self.N, self.m = self.Xs.shape
        self.n = self.Xt.shape[1]
        self.r = min(self.m, self.n)
        self.lambda_s, self.lambda_t = cfg.regularization(self.m, self.n)
        self.nodes, self.weights = simpson_nodes(0.0, cfg.delta0, cfg.panels)
        self.d_he = np.array([self.original_cosines(d) for d in self.nodes])
        self.evaluations = 0
        # sufficient statistics for the Gram-matrix route used by cost_fast
        self._XsXs = self.Xs.T @ self.Xs
        self._XtXt = self.Xt.T @ self.Xt
        self._XsXt = self.Xs.T @ self.Xt
        self._ss = self.Xs.sum(axis=0)
        self._st = self.Xt.sum(axis=0)

    def original_cosines(self, delta: float) -> np.ndarray:
        A = top_eigenpairs(self.Xs + delta, self.m)[1]
        B = top_eigenpairs(self.Xt + delta, self.n)[1]
        return principal_cosines(A, B)

    def mapped_cosines(self, delta: float, maps: LmmPair) -> np.ndarray:
        C = top_eigenpairs(apply_lmm(self.Xs + delta, maps.Us), self.r)[1]
        D = top_eigenpairs(apply_lmm(self.Xt + delta, maps.Ut), self.r)[1]
        return principal_cosines(C, D)

    def integrand(self, delta: float, maps: LmmPair, d_he=None) -> float:
        if d_he is None:
            d_he = self.original_cosines(delta)
        return float(np.sum(np.abs(d_he - self.mapped_cosines(delta, maps))))

    def penalty(self, maps: LmmPair) -> float:
        return 0.5 * self.lambda_s * float(np.sum(maps.Us**2)) + 0.5 * self.lambda_t * float(
            np.sum(maps.Ut**2)
        )

    def cost(self, maps: LmmPair) -> float:
        self.evaluations += 1
        d_ho = self._mapped_cosines_all(maps)
        g = np.sum(np.abs(self.d_he - d_ho), axis=1)
        if not np.all(np.isfinite(g)):
            raise FloatingPointError("non-finite integrand")
        return float(self.weights @ g) + self.penalty(maps)

    def cost_fast(self, maps: LmmPair) -> float:
        """Cost through r x r Gram matrices, O(r^3) per node regardless of N.

        Accurate to roughly ``eps * cond(F)^2``; meant for ranking many
        candidates (cuckoo search).  Falls back to :meth:`cost` when a Gram
        matrix is too ill-conditioned.
        """
        d_ho = self._gram_cosines(maps)
        if d_ho is None:
            return self.cost(maps)
        self.evaluations += 1
        g = np.sum(np.abs(self.d_he - d_ho), axis=1)
        return float(self.weights @ g) + self.penalty(maps)

    def _gram_cosines(self, maps):
        Us, Ut = maps.Us, maps.Ut
        cs, ct = Us.sum(axis=1), Ut.sum(axis=1)
        dl = self.nodes[:, None, None]
        N = self.N

        def gram(U, c, XX, sx):
            us = U @ sx
            base = U @ XX @ U.T
            cross = np.outer(us, c) + np.outer(c, us)
            return base + dl * cross + dl**2 * N * np.outer(c, c)

        Gs = gram(Us, cs, self._XsXs, self._ss)
        Gt = gram(Ut, ct, self._XtXt, self._st)
        Gst = Us @ self._XsXt @ Ut.T + dl * (
            np.outer(Us @ self._ss, ct) + np.outer(cs, Ut @ self._st)
        ) + dl**2 * N * np.outer(cs, ct)
        try:
            Ls = np.linalg.cholesky(Gs)
            Lt = np.linalg.cholesky(Gt)
        except np.linalg.LinAlgError:
            return None
        for L in (Ls, Lt):
            d = np.abs(np.diagonal(L, axis1=1, axis2=2))
            if np.any(d.min(axis=1) < 1e-5 * d.max(axis=1)):
                return None
        M = np.linalg.solve(Ls, Gst)
        M = np.swapaxes(np.linalg.solve(Lt, np.swapaxes(M, 1, 2)), 1, 2)
        return np.clip(np.linalg.svd(M, compute_uv=False), 0.0, 1.0)

    def _mapped_cosines_all(self, maps):
        # All nodes at once: (X + delta) U^T = X U^T + delta * 1 (U 1)^T
        Fs = self._stacked_maps(self.Xs, maps.Us)
        Ft = self._stacked_maps(self.Xt, maps.Ut)
        Cs, ok_s = _stacked_bases(Fs, self.r)
        Ct, ok_t = _stacked_bases(Ft, self.r)
        out = np.clip(
            np.linalg.svd(np.swapaxes(Cs, 1, 2) @ Ct, compute_uv=False), 0.0, 1.0
        )
        for k in np.flatnonzero(~(ok_s & ok_t)):
            out[k] = self.mapped_cosines(self.nodes[k], maps)
        return out

    def _stacked_maps(self, X, U):
        base = X @ U.T
        shift = U.sum(axis=1)
        return base[None, :, :] + self.nodes[:, None, None] * shift[None, None, :]

    # -- gradient --

    def grad(self, maps: LmmPair) -> tuple[np.ndarray, np.ndarray]:
        Gs = self.lambda_s * maps.Us
        Gt = self.lambda_t * maps.Ut
        for delta, w, d_he in zip(self.nodes, self.weights, self.d_he):
            try:
                gs, gt = self.node_grad(delta, maps, d_he)
            except DegenerateSpectrumError:
                log.debug("degenerate spectrum at delta=%g, retrying shifted", delta)
                gs, gt = self.node_grad(delta + RETRY_SHIFT, maps)
            Gs = Gs + w * gs
            Gt = Gt + w * gt
        return Gs, Gt

    def node_grad(self, delta: float, maps: LmmPair, d_he=None):
        """Gradient of the integrand at one shift value."""
        if d_he is None:
            d_he = self.original_cosines(delta)
        Xs = self.Xs + delta
        Xt = self.Xt + delta
        Fs = apply_lmm(Xs, maps.Us)
        Ft = apply_lmm(Xt, maps.Ut)
        lam_s, C = top_eigenpairs(Fs, self.r)
        lam_t, D = top_eigenpairs(Ft, self.r)
        P, sig, Qt = np.linalg.svd(C.T @ D)
        # d|a - sigma|/d sigma, with sign(0) = 0 at ties
        gap = d_he - np.clip(sig, 0.0, 1.0)
        signs = np.where(np.abs(gap) <= TIE_TOL, 0.0, -np.sign(gap))
        W = (P * signs) @ Qt  # d g / d (C^T D)
        dC = D @ W.T
        dD = C @ W
        gs = _span_adjoint(Fs, C, lam_s, dC).T @ Xs
        gt = _span_adjoint(Ft, D, lam_t, dD).T @ Xt
        return gs, gt


def _stacked_bases(F, r):
    """Left singular vectors of a stack of matrices plus a full-rank flag per item."""
    U, s, _ = np.linalg.svd(F, full_matrices=False)
    tol = max(F.shape[1:]) * np.finfo(float).eps * s[:, :1]
    ok = np.all(s[:, :r] > tol, axis=1)
    return U[:, :, :r], ok


def _span_adjoint(F, Y, lam, gY):
    """Pull back ``dg/dY`` (Y = leading eigenvectors of F F^T) to ``dg/dF``.

    Uses ``dy_l = -(F F^T - lam_l I)^+ (dF F^T + F dF^T) y_l``.  The
    pseudoinverse acts on span(Y) through ``1/(lam_j - lam_l)`` and on its
    orthogonal complement (the zero eigenspace) through ``-1/lam_l``.
    """
    r = Y.shape[1]
    diff = lam[:, None] - lam[None, :]  # diff[j, l] = lam_j - lam_l
    off = ~np.eye(r, dtype=bool)
    if r > 1 and np.min(np.abs(diff[off])) <= GAP_TOL:
        raise DegenerateSpectrumError("repeated eigenvalue in mapped data")
    if np.min(lam) <= GAP_TOL:
        raise DegenerateSpectrumError("mapped data is rank deficient")
    inv = np.zeros_like(diff)
    inv[off] = 1.0 / diff[off]
    K = Y.T @ gY  # K[j, l] = y_j . g_l
    H = Y @ (K * inv) - (gY - Y @ K) / lam[None, :]
    FtY = F.T @ Y
    FtH = F.T @ H
    return -(H @ FtY.T + Y @ FtH.T)


def cost_j1(Xs, Xt, maps: LmmPair, cfg: GlgConfig = GlgConfig()) -> float:
    Xs, Xt = _check_pair(Xs, Xt, maps)
    return J1Problem(Xs, Xt, cfg).cost(maps)


def grad_j1(Xs, Xt, maps: LmmPair, cfg: GlgConfig = GlgConfig()):
    Xs, Xt = _check_pair(Xs, Xt, maps)
    return J1Problem(Xs, Xt, cfg).grad(maps)


# -- initialization and descent -----------------------------------------------


def equalize_rows(Xs, Xt, cap: int, seed):
    """Row-subsample both domains to a common count ``min(Ns, Nt, cap)``."""
    Xs = np.asarray(Xs, dtype=float)
    Xt = np.asarray(Xt, dtype=float)
    N = min(Xs.shape[0], Xt.shape[0], cap)
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x5EED]))
    if Xs.shape[0] > N:
        Xs = Xs[np.sort(rng.choice(Xs.shape[0], N, replace=False))]
    if Xt.shape[0] > N:
        Xt = Xt[np.sort(rng.choice(Xt.shape[0], N, replace=False))]
    return Xs, Xt


def _csa(problem: J1Problem, cfg: GlgConfig, seed):
    m, n, r = problem.m, problem.n, problem.r
    dim = r * (m + n)
    lo, hi = cfg.csa_bounds

    def objective(vec):
        return problem.cost_fast(LmmPair.unflatten(np.maximum(vec, cfg.eps_pos), m, n))

    res = cuckoo_search(
        objective,
        np.full(dim, lo),
        np.full(dim, hi),
        n_nests=cfg.csa_nests,
        discovery=cfg.csa_discovery,
        n_iter=cfg.csa_iters,
        rng=np.random.default_rng(np.random.SeedSequence([int(seed), 0xC5A])),
    )
    maps = LmmPair.unflatten(np.maximum(res.best, cfg.eps_pos), m, n)
    return maps, res


def csa_init(Xs, Xt, cfg: GlgConfig = GlgConfig()) -> LmmPair:
    """Cuckoo-search starting point for the descent."""
    Xs, Xt = _check_pair(Xs, Xt)
    return _csa(J1Problem(Xs, Xt, cfg), cfg, cfg.seed)[0]


def _descent_step(problem, maps, cfg):
    Gs, Gt = problem.grad(maps)
    best = None
    for eta in cfg.eta_grid:
        cand = LmmPair(
            project_positive(maps.Us - eta * Gs, cfg.eps_pos),
            project_positive(maps.Ut - eta * Gt, cfg.eps_pos),
        )
        j = problem.cost(cand)
        if best is None or j < best[0]:
            best = (j, eta, cand)
    return best, float(np.linalg.norm(Gs)), float(np.linalg.norm(Gt))


def fit_glg(Xs, Xt, cfg: GlgConfig = GlgConfig(), init: LmmPair | None = None):
    """Fit the map pair: cuckoo-search start, then projected gradient descent.

    Rows are subsampled to a common count (at most ``cfg.span_cap``) before
    optimizing.  Each iteration tries every step size in ``cfg.eta_grid``
    along one gradient and keeps the best candidate unless it raises the cost.
    """
    Xs = np.asarray(Xs, dtype=float)
    Xt = np.asarray(Xt, dtype=float)
    Xs_o, Xt_o = equalize_rows(Xs, Xt, cfg.span_cap, cfg.seed)
    problem = J1Problem(Xs_o, Xt_o, cfg)
    trace = FitTrace()

    if init is None:
        maps, res = _csa(problem, cfg, cfg.seed)
        trace.csa_history = list(res.history)
    else:
        maps = init
    j = problem.cost(maps)
    trace.records.append({"iteration": 0, "j1": j, "eta": None, "grad_norm_s": None, "grad_norm_t": None})

    for it in range(1, cfg.max_iter + 1):
        (j_new, eta, cand), gn_s, gn_t = _descent_step(problem, maps, cfg)
        if j_new > j:
            if it == 1 and init is None and not trace.reinitialized:
                trace.reinitialized = True
                alt, _ = _csa(problem, cfg, cfg.seed + 1_000_003)
                j_alt = problem.cost(alt)
                if j_alt < j:
                    maps, j = alt, j_alt
                    trace.records.append(
                        {"iteration": it, "j1": j, "eta": None, "grad_norm_s": gn_s, "grad_norm_t": gn_t}
                    )
                    continue
            trace.reason = "stalled"
            break
        delta = j - j_new
        maps, j = cand, j_new
        trace.records.append({"iteration": it, "j1": j, "eta": eta, "grad_norm_s": gn_s, "grad_norm_t": gn_t})
        if delta < cfg.err_tol:
            trace.reason = "converged"
            break
    else:
        trace.reason = "max_iter"
    log.info("fit_glg: %s after %d records, J1 %.6g -> %.6g", trace.reason, len(trace.records), trace.j1[0], j)
    return maps, trace


def adapt_glg(Xs, Xt, cfg: GlgConfig = GlgConfig(), d: int | None = None, maps: LmmPair | None = None):
    """Map both full domains with fitted LMMs, then embed them through the GFK.

    Returns the adapted source and target matrices (each with r = min(m, n)
    columns).  Pass ``maps`` to skip fitting.
    """
    from .gfk import gfk_embed, gfk_kernel
    from .mlkit.stats import zscore

    Xs = np.asarray(Xs, dtype=float)
    Xt = np.asarray(Xt, dtype=float)
    if maps is None:
        maps, _ = fit_glg(Xs, Xt, cfg)
    Hs = zscore(apply_lmm(Xs, maps.Us))
    Ht = zscore(apply_lmm(Xt, maps.Ut))
    kern = gfk_kernel(Hs, Ht, d)
    return gfk_embed(Hs, kern), gfk_embed(Ht, kern)


def with_overrides(cfg: GlgConfig, **kw) -> GlgConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})


__all__ = [
    "GlgConfig",
    "FitTrace",
    "J1Problem",
    "simpson_nodes",
    "simpson_integrate",
    "cost_j1",
    "grad_j1",
    "csa_init",
    "fit_glg",
    "adapt_glg",
    "equalize_rows",
]
