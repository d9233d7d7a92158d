"""Dataset ingestion, sampling and the transfer-task registry."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

MISSING = frozenset({"?", "NA", "nan", "NaN", ""})


class CsvParseError(ValueError):
    pass


class DataMissingError(FileNotFoundError):
    pass


@dataclass(frozen=True)
class LabeledDomain:
    X: np.ndarray
    y: np.ndarray | None = None
    name: str = ""
    dropped_rows: int = 0

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        object.__setattr__(self, "X", X)
        if self.y is not None:
            y = np.asarray(self.y, dtype=int)
            if y.shape != (X.shape[0],):
                raise ValueError(f"{X.shape[0]} rows but {y.shape} labels")
            if not np.all(np.isin(y, (-1, 1))):
                raise ValueError("labels must be -1 or +1")
            object.__setattr__(self, "y", y)

    @property
    def shape(self):
        return self.X.shape

    def positive_fraction(self) -> float:
        return float(np.mean(self.y == 1))


@dataclass(frozen=True)
class TaskSpec:
    code: str
    source: str  # dataset key
    target: str
    source_title: str
    target_title: str
    field: str
    labels: str  # label note as printed for the task
    positive_meaning: str | None


@lru_cache(maxsize=None)
def dataset_catalog() -> dict:
    text = resources.files("glg").joinpath("datasets.json").read_text()
    return json.loads(text)


def default_data_dir() -> Path:
    return Path(os.environ.get("GLG_DATA_DIR", "data"))


# -- CSV ----------------------------------------------------------------------------


def _rows(path, delimiter):
    with open(path, newline="") as fh:
        if delimiter is None:
            for line in fh:
                if line.strip():
                    yield line.split()
        else:
            for row in csv.reader(fh, delimiter=delimiter):
                if row and any(cell.strip() for cell in row):
                    yield [cell.strip() for cell in row]


def load_csv(
    path,
    label_column=None,
    label_map: dict | None = None,
    delimiter: str | None = ",",
    header: bool = False,
    drop_columns=(),
    name: str = "",
) -> LabeledDomain:
    """Read a numeric table, dropping rows with missing cells.

    ``label_column`` may be a header name or a (possibly negative) index;
    label cells are translated through ``label_map`` (string -> +/-1).
    """
    path = Path(path)
    rows = _rows(path, delimiter)
    names = None
    if header:
        names = next(rows)
    data, labels = [], []
    dropped = 0
    width = None
    label_idx = drop_idx = None
    for lineno, row in enumerate(rows, start=2 if header else 1):
        if width is None:
            width = len(row)
            label_idx = _column_index(label_column, names, width) if label_column is not None else None
            drop_idx = {_column_index(c, names, width) for c in drop_columns}
        if len(row) != width:
            raise CsvParseError(f"{path}:{lineno}: expected {width} cells, found {len(row)}")
        feats = [j for j in range(width) if j != label_idx and j not in drop_idx]
        if any(row[j] in MISSING for j in feats):
            dropped += 1
            continue
        values = []
        for j in feats:
            try:
                values.append(float(row[j]))
            except ValueError:
                raise CsvParseError(f"{path}:{lineno}: column {j + 1}: non-numeric cell {row[j]!r}") from None
        data.append(values)
        if label_idx is not None:
            cell = row[label_idx]
            if label_map is None:
                labels.append(int(float(cell)))
            elif cell in label_map:
                labels.append(int(label_map[cell]))
            else:
                raise CsvParseError(f"{path}:{lineno}: unknown label value {cell!r}")
    X = np.array(data, dtype=float)
    y = np.array(labels, dtype=int) if label_idx is not None else None
    return LabeledDomain(X=X, y=y, name=name or path.stem, dropped_rows=dropped)


def _column_index(col, names, width):
    if isinstance(col, str):
        if names is None or col not in names:
            raise CsvParseError(f"column {col!r} not found in header")
        return names.index(col)
    idx = int(col)
    if not -width <= idx < width:
        raise CsvParseError(f"column index {idx} out of range for {width} columns")
    return idx % width


def sha256sum(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def verify(data_dir=None) -> dict:
    """Checksum status of each dataset file: ok / missing / mismatch / unchecked."""
    data_dir = Path(data_dir or default_data_dir())
    status = {}
    for key, entry in dataset_catalog().items():
        for fname, digest in zip(entry["files"], entry["sha256"]):
            p = data_dir / fname
            if not p.exists():
                status[fname] = "missing"
            elif digest is None:
                status[fname] = "unchecked"
            else:
                status[fname] = "ok" if sha256sum(p) == digest else "mismatch"
    return status


@lru_cache(maxsize=32)
def _load_cached(key, data_dir, check):
    entry = dataset_catalog()[key]
    parts = []
    for fname, digest in zip(entry["files"], entry["sha256"]):
        p = Path(data_dir) / fname
        if not p.exists():
            raise DataMissingError(
                f"{p} not found; fetch the data and run `glg prepare --data-dir {data_dir}`"
            )
        if check and digest is not None and sha256sum(p) != digest:
            raise DataMissingError(f"{p} fails its checksum; run `glg prepare --data-dir {data_dir}`")
        parts.append(
            load_csv(
                p,
                label_column=entry["label_column"],
                label_map=entry["label_map"],
                delimiter=entry["delimiter"],
                header=entry["header"],
                drop_columns=entry.get("drop_columns", ()),
                name=key,
            )
        )
    # source/target halves of a text domain are merged into one domain
    X = np.vstack([p.X for p in parts])
    y = np.concatenate([p.y for p in parts])
    return LabeledDomain(X=X, y=y, name=key, dropped_rows=sum(p.dropped_rows for p in parts))


def load_dataset(key: str, data_dir=None, check: bool = True) -> LabeledDomain:
    data_dir = str(Path(data_dir or default_data_dir()).resolve())
    return _load_cached(key, data_dir, check)


# -- preprocessing --------------------------------------------------------------


def svd_reduce_text(X, fraction: float = 0.5, mode: str = "count") -> np.ndarray:
    """Project rows onto the leading right singular directions of X.

    ``mode="count"`` keeps ``ceil(fraction * rank)`` directions;
    ``mode="energy"`` keeps the fewest directions whose squared singular
    values reach ``fraction`` of the total.
    """
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    X = np.asarray(X, dtype=float)
    _, s, Vt = np.linalg.svd(X, full_matrices=False)
    tol = max(X.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol))
    if mode == "count":
        k = math.ceil(fraction * rank)
    elif mode == "energy":
        energy = np.cumsum(s[:rank] ** 2) / np.sum(s[:rank] ** 2)
        k = int(np.searchsorted(energy, fraction - 1e-12) + 1)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return X @ Vt[:k].T


def sample_unbiased(D: LabeledDomain, n: int, seed) -> LabeledDomain:
    """Draw n/2 instances of each class without replacement."""
    if n % 2:
        raise ValueError("n must be even")
    rng = np.random.default_rng(seed)
    half = n // 2
    picks = []
    for label in (1, -1):
        idx = np.flatnonzero(D.y == label)
        if len(idx) < half:
            raise ValueError(f"class {label} has {len(idx)} members, need {half}")
        picks.append(rng.choice(idx, half, replace=False))
    idx = rng.permutation(np.concatenate(picks))
    return replace(D, X=D.X[idx], y=D.y[idx])


def balanced_size(D: LabeledDomain, cap: int) -> int:
    smallest = min(int(np.sum(D.y == 1)), int(np.sum(D.y == -1)))
    return min(cap, 2 * smallest)


def permute(D: LabeledDomain, seed) -> LabeledDomain:
    """Shuffle rows (labels follow) and columns independently."""
    rng = np.random.default_rng(seed)
    rows = rng.permutation(D.X.shape[0])
    cols = rng.permutation(D.X.shape[1])
    y = None if D.y is None else D.y[rows]
    return replace(D, X=D.X[rows][:, cols], y=y)


# -- tasks ----------------------------------------------------------------------------

_TASKS = [
    ("G2A", "german", "australian", "Credit assessment", "1: Good", "Good"),
    ("A2G", "australian", "german", "Credit assessment", "1: Good", "Good"),
    ("Ope2Opl", "orgs_people", "orgs_places", "Text classification", "1: Orgs", "Orgs"),
    ("Opl2Ope", "orgs_places", "orgs_people", "Text classification", "1: Orgs", "Orgs"),
    ("Opl2Ppl", "orgs_places", "people_places", "Text classification", "-1: Places", None),
    ("Ppl2Opl", "people_places", "orgs_places", "Text classification", "-1: Places", None),
    ("Ppl2Ope", "people_places", "orgs_people", "Text classification", "-", None),
    ("Ope2Ppl", "orgs_people", "people_places", "Text classification", "-", None),
    ("CO2CD", "co", "cd", "Cancer detection", "1: Malignant", "Malignant"),
    ("CD2CO", "cd", "co", "Cancer detection", "1: Malignant", "Malignant"),
]


def task_registry() -> list[TaskSpec]:
    cat = dataset_catalog()
    return [
        TaskSpec(
            code=code,
            source=src,
            target=tgt,
            source_title=cat[src]["title"],
            target_title=cat[tgt]["title"],
            field=fld,
            labels=labels,
            positive_meaning=pos,
        )
        for code, src, tgt, fld, labels, pos in _TASKS
    ]


def get_task(code: str) -> TaskSpec:
    for t in task_registry():
        if t.code.lower() == code.lower():
            return t
    raise KeyError(f"unknown task {code!r}")
