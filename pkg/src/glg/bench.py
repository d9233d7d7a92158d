"""Benchmark harness: seeded runs of every model on every transfer task."""

from __future__ import annotations

import json
import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import datasets as ds
from .gfk import gfk_embed, gfk_kernel
from .lmm import apply_lmm, random_linear_map, random_lmm
from .mlkit import accuracy, kmeans2, mmd2_test, svm_predict, svm_train, zscore
from .optim import GlgConfig, fit_glg

log = logging.getLogger(__name__)

MODELS = ("A1", "CM", "DG", "RMG", "RLG", "GLG")
CREDIT_SAMPLE = 600
TEXT_SAMPLE = 1500

# stream tags, so each stochastic stage of a run draws from its own generator
_PERMUTE_S, _PERMUTE_T, _SAMPLE_S, _SAMPLE_T, _MAP_S, _MAP_T, _KMEANS = range(1, 8)


def stage_seed(seed: int, tag: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), tag])


@dataclass(frozen=True)
class RunConfig:
    tasks: tuple = ("CD2CO",)
    models: tuple = ("GLG",)
    runs: int = 50
    seed: int = 0
    glg: dict = field(default_factory=dict)  # GlgConfig overrides
    subspace_dim: int | None = None
    data_dir: str = "data"
    out: str = "reports"
    workers: int = 1

    def __post_init__(self):
        tasks = (self.tasks,) if isinstance(self.tasks, str) else tuple(self.tasks)
        models = (self.models,) if isinstance(self.models, str) else tuple(self.models)
        models = tuple(m.upper() for m in models)
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if not models:
            raise ValueError("at least one model is required")
        bad = [m for m in models if m not in MODELS]
        if bad:
            raise ValueError(f"unknown model(s) {bad}; choose from {MODELS}")
        tasks = tuple(ds.get_task(t).code for t in tasks)
        object.__setattr__(self, "tasks", tasks)
        object.__setattr__(self, "models", models)
        GlgConfig(**self.glg)  # validate early

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        raw = json.loads(Path(path).read_text())
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)

    def glg_config(self, seed: int) -> GlgConfig:
        return GlgConfig(**{**self.glg, "seed": int(seed)})

    def echo(self) -> dict:
        """Settings that affect results (paths and worker count excluded)."""
        return {
            "seed": self.seed,
            "runs": self.runs,
            "glg": dict(sorted(self.glg.items())),
            "subspace_dim": self.subspace_dim,
        }


@dataclass(frozen=True)
class TaskReport:
    task: str
    model: str
    runs: int
    seeds: list
    accuracies: list
    avg: float
    std: float
    max: float
    min: float
    config: dict
    samples: dict
    warnings: list

    @classmethod
    def from_runs(cls, task, model, seeds, accs, config, samples, warns) -> "TaskReport":
        a = np.asarray(accs, dtype=float)
        std = float(np.std(a, ddof=1)) if len(a) > 1 else 0.0
        return cls(
            task=task,
            model=model,
            runs=len(a),
            seeds=[int(s) for s in seeds],
            accuracies=[float(x) for x in a],
            avg=float(np.mean(a)),
            std=std,
            max=float(np.max(a)),
            min=float(np.min(a)),
            config=config,
            samples=samples,
            warnings=sorted(set(warns)),
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


# -- adapters -----------------------------------------------------------------------


def _gfk_pair(Hs, Ht, d, standardize=True):
    if standardize:
        Hs, Ht = zscore(Hs), zscore(Ht)
    kern = gfk_kernel(Hs, Ht, d)
    return gfk_embed(Hs, kern), gfk_embed(Ht, kern)


def _pca_scores(X, r):
    """Top-r principal-component scores; a domain already at r columns is left as is."""
    if X.shape[1] == r:
        return X
    Xc = X - X.mean(axis=0)
    _, _, Vt = np.linalg.svd(Xc, full_matrices=False)
    return Xc @ Vt[:r].T


def homogeneous_pair(kind: str, Xs, Xt, seed, glg_cfg: GlgConfig | None = None):
    """Map both domains to r = min(m, n) columns before the kernel step."""
    m, n = Xs.shape[1], Xt.shape[1]
    r = min(m, n)
    kind = kind.upper()
    if kind == "DG":
        return _pca_scores(Xs, r), _pca_scores(Xt, r)
    if kind == "RMG":
        Us = random_linear_map(r, m, stage_seed(seed, _MAP_S))
        Ut = random_linear_map(r, n, stage_seed(seed, _MAP_T))
    elif kind == "RLG":
        Us = random_lmm(r, m, stage_seed(seed, _MAP_S))
        Ut = random_lmm(r, n, stage_seed(seed, _MAP_T))
    elif kind == "GLG":
        cfg = glg_cfg or GlgConfig(seed=int(seed))
        maps, trace = fit_glg(Xs, Xt, cfg)
        if trace.reason == "stalled":
            warnings.warn("GLG descent stalled after initialization", RuntimeWarning)
        Us, Ut = maps.Us, maps.Ut
    else:
        raise ValueError(f"no adapter for {kind!r}")
    return apply_lmm(Xs, Us), apply_lmm(Xt, Ut)


def adapt_baseline(kind: str, Xs, Xt, seed, d: int | None = None):
    """DG, RMG or RLG: map to a common dimension, then embed through the GFK."""
    if kind.upper() not in ("DG", "RMG", "RLG"):
        raise ValueError(f"{kind!r} is not a baseline adapter")
    Hs, Ht = homogeneous_pair(kind, Xs, Xt, seed)
    return _gfk_pair(Hs, Ht, d, standardize=kind.upper() != "DG")


def predict_nontransfer(kind: str, Xt, seed) -> np.ndarray:
    kind = kind.upper()
    if kind == "A1":
        return np.ones(Xt.shape[0], dtype=int)
    if kind == "CM":
        return kmeans2(Xt, stage_seed(seed, _KMEANS)).labels
    raise ValueError(f"{kind!r} is not a non-transfer model")


# -- runs -----------------------------------------------------------------------------


def prepare_run(task: ds.TaskSpec, seed: int, data_dir) -> tuple[ds.LabeledDomain, ds.LabeledDomain]:
    """Load, permute and sample one run's source and target domains (zscored)."""
    src = ds.permute(ds.load_dataset(task.source, data_dir), stage_seed(seed, _PERMUTE_S))
    tgt = ds.permute(ds.load_dataset(task.target, data_dir), stage_seed(seed, _PERMUTE_T))
    src = _sample(task.source, src, stage_seed(seed, _SAMPLE_S))
    tgt = _sample(task.target, tgt, stage_seed(seed, _SAMPLE_T))
    src = ds.LabeledDomain(zscore(src.X), src.y, src.name, src.dropped_rows)
    tgt = ds.LabeledDomain(zscore(tgt.X), tgt.y, tgt.name, tgt.dropped_rows)
    return src, tgt


def _sample(key, D, seed):
    entry = ds.dataset_catalog()[key]
    if key in ("german", "australian"):
        return ds.sample_unbiased(D, CREDIT_SAMPLE, seed)
    if entry.get("text"):
        D = ds.LabeledDomain(ds.svd_reduce_text(D.X), D.y, D.name, D.dropped_rows)
        return ds.sample_unbiased(D, ds.balanced_size(D, TEXT_SAMPLE), seed)
    return D  # cancer domains are used whole


def single_run(task: ds.TaskSpec, model: str, seed: int, cfg: RunConfig) -> tuple[float, dict, list]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        src, tgt = prepare_run(task, seed, cfg.data_dir)
        model = model.upper()
        if model in ("A1", "CM"):
            pred = predict_nontransfer(model, tgt.X, seed)
        else:
            Hs, Ht = homogeneous_pair(model, src.X, tgt.X, seed, cfg.glg_config(seed))
            # PCA scores of zscored data are a rotation; rescaling them would whiten
            Zs, Zt = _gfk_pair(Hs, Ht, cfg.subspace_dim, standardize=model != "DG")
            pred = svm_predict(svm_train(Zs, src.y), Zt)
        acc = accuracy(pred, tgt.y)
    samples = {"source": int(src.X.shape[0]), "target": int(tgt.X.shape[0])}
    warns = [f"{w.category.__name__}: {w.message}" for w in caught]
    return acc, samples, warns


def _run_one(args):
    code, model, seed, cfg = args
    return single_run(ds.get_task(code), model, seed, cfg)


def run_task(task: ds.TaskSpec | str, model: str, cfg: RunConfig) -> TaskReport:
    task = ds.get_task(task) if isinstance(task, str) else task
    seeds = [cfg.seed + i for i in range(cfg.runs)]
    jobs = [(task.code, model, s, cfg) for s in seeds]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    accs = [r[0] for r in results]
    warns = [w for r in results for w in r[2]]
    samples = results[0][1]
    return TaskReport.from_runs(task.code, model.upper(), seeds, accs, cfg.echo(), samples, warns)


def report_name(task: str, model: str) -> str:
    return f"{task}_{model.upper()}.json"


def summary_table(reports: dict) -> str:
    """Plain-text grid of avg +/- std (%), tasks in registry order."""
    models = [m for m in MODELS if any(k[1] == m for k in reports)]
    codes = [t.code for t in ds.task_registry() if any(k[0] == t.code for k in reports)]
    fields = {t.code: t.field for t in ds.task_registry()}
    head = ["Field", "Task"] + models
    rows = []
    for code in codes:
        row = [fields[code], code]
        for m in models:
            rep = reports.get((code, m))
            if rep is None:
                row.append("")
            elif isinstance(rep, str):
                row.append("error")
            else:
                row.append(f"{100 * rep.avg:.2f}%+-{100 * rep.std:.2f}%")
        rows.append(row)
    widths = [max(len(r[i]) for r in [head] + rows) for i in range(len(head))]
    fmt = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    lines = [fmt(head), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows]
    return "\n".join(lines) + "\n"


def run_all(cfg: RunConfig) -> int:
    """Write one JSON report per (task, model) plus summary.txt; return an exit code."""
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    reports = {}
    failed = False
    order = [t.code for t in ds.task_registry()]
    for code in sorted(cfg.tasks, key=order.index):
        for model in cfg.models:
            path = out / report_name(code, model)
            try:
                rep = run_task(code, model, cfg)
            except Exception as exc:  # recorded per cell, the sweep continues
                failed = True
                msg = f"{type(exc).__name__}: {exc}"
                log.error("%s/%s failed: %s", code, model, msg)
                reports[(code, model)] = msg
                path.write_text(
                    json.dumps({"task": code, "model": model, "error": msg}, indent=2, sort_keys=True) + "\n"
                )
                continue
            reports[(code, model)] = rep
            path.write_text(rep.to_json())
    (out / "summary.txt").write_text(summary_table(reports))
    return 1 if failed else 0


# -- MMD diagnostic ---------------------------------------------------------------


@dataclass(frozen=True)
class MmdRow:
    stage: str
    statistic: float
    threshold: float
    p_value: float
    verdict: str


def mmd_diagnostic(task, seed: int, cfg: RunConfig, model: str = "GLG", permutations: int = 1000) -> dict:
    """MMD verdicts for the mapped (homogeneous) and the adapted domains of one run."""
    task = ds.get_task(task) if isinstance(task, str) else task
    src, tgt = prepare_run(task, seed, cfg.data_dir)
    Hs, Ht = homogeneous_pair(model, src.X, tgt.X, seed, cfg.glg_config(seed))
    if model.upper() != "DG":
        Hs, Ht = zscore(Hs), zscore(Ht)
    Zs, Zt = _gfk_pair(Hs, Ht, cfg.subspace_dim, standardize=False)
    pred = svm_predict(svm_train(Zs, src.y), Zt)
    rows = []
    for stage, (A, B) in (("homogeneous representations", (Hs, Ht)), ("adapted domains", (Zs, Zt))):
        res = mmd2_test(A, B, gamma=1.0 / A.shape[1], permutations=permutations, seed=seed)
        rows.append(asdict(MmdRow(stage, res.statistic, res.threshold, res.p_value, res.verdict)))
    return {"task": task.code, "model": model.upper(), "seed": int(seed), "accuracy": accuracy(pred, tgt.y), "tests": rows}


def format_mmd(diag: dict) -> str:
    lines = [f"{diag['task']}/{100 * diag['accuracy']:.2f}% ({diag['model']}, seed {diag['seed']})"]
    for row in diag["tests"]:
        lines.append(
            f"  {row['stage']:<28} {row['verdict']:<4} MMD2={row['statistic']:.6g} "
            f"threshold={row['threshold']:.6g} p={row['p_value']:.4f}"
        )
    return "\n".join(lines) + "\n"
