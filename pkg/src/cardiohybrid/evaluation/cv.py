"""Stratified k-fold cross-validation with every transform fitted in-fold.

Per fold, imputation, one-hot encoding, min-max scaling and SMOTE are all
fitted on that fold's training rows only; validation rows are transformed
with the fitted objects and are never oversampled.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..ingest import RawTable
from ..preprocess import Imputer, apply_encoding, apply_normalizer, fit_encoding, fit_normalizer, smote_oversample
from ..seeding import derive_seed
from .metrics import METRIC_NAMES, MetricsReport, mean_std, score

SYNTHETIC = -1


def n_threads() -> int:
    """Worker cap from ``HYCARD_THREADS``; all available cores when unset."""
    raw = os.environ.get("HYCARD_THREADS", "").strip()
    if raw:
        value = int(raw)
        if value < 1:
            raise ValueError("HYCARD_THREADS must be >= 1")
        return value
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def stratified_kfold(y, k: int, seed: int) -> list[np.ndarray]:
    """Split row indices into ``k`` disjoint validation sets.

    Each class is shuffled on its own and dealt round-robin, continuing the
    rotation from one class to the next, so per-class counts and fold sizes
    both differ by at most one between folds.
    """
    y = np.asarray(y)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    classes, counts = np.unique(y, return_counts=True)
    if (counts < k).any():
        small = classes[counts < k][0]
        raise ValueError(f"class {small!r} has {counts[classes == small][0]} members, fewer than k={k}")
    folds = [[] for _ in range(k)]
    pos = 0
    for c in classes:
        idx = np.flatnonzero(y == c)
        idx = idx[rng.permutation(idx.size)]
        for i in idx:
            folds[pos % k].append(int(i))
            pos += 1
    return [np.sort(np.asarray(f, dtype=np.intp)) for f in folds]


@dataclass(frozen=True)
class PreprocessConfig:
    impute: bool = True
    normalize: bool = True
    smote: bool = True
    smote_k: int = 5

    def to_json(self) -> dict:
        return {"impute": self.impute, "normalize": self.normalize, "smote": self.smote, "smote_k": self.smote_k}


@dataclass
class FoldData:
    """One fold's model-ready matrices and the transforms fitted for it.

    ``origin[i]`` is the original row index behind training row ``i``, or
    ``SYNTHETIC`` for rows created by SMOTE.
    """

    fold: int
    train_idx: np.ndarray
    val_idx: np.ndarray
    X_train: np.ndarray
    y_train: np.ndarray
    origin: np.ndarray
    X_val: np.ndarray
    y_val: np.ndarray
    imputer: Imputer | None = None
    encoding: object = None
    normalizer: object = None


def _labels(data):
    return data.labels() if isinstance(data, RawTable) else np.asarray(data[1], dtype=np.int64)


def prepare_fold(data, train_idx, val_idx, config: PreprocessConfig, seed: int, fold: int = 0) -> FoldData:
    """Fit transforms on ``train_idx`` and apply them to both sides.

    ``data`` is a RawTable or an ``(X, y)`` pair of numeric arrays.
    """
    train_idx = np.asarray(train_idx, dtype=np.intp)
    val_idx = np.asarray(val_idx, dtype=np.intp)
    y = _labels(data)
    y_tr, y_va = y[train_idx], y[val_idx]
    if np.unique(y_tr).size < 2:
        raise ValueError(f"fold {fold}: a class is missing from the training rows")
    imputer = encoding = groups = None
    if isinstance(data, RawTable):
        table = data
        if config.impute:
            imputer = Imputer.fit(table, train_idx)
            table = imputer.apply(table)
        encoding = fit_encoding(table, train_idx)
        X_tr = apply_encoding(table.take(train_idx), encoding).values
        X_va = apply_encoding(table.take(val_idx), encoding).values
        groups = encoding.onehot_groups()
    else:
        X = np.asarray(data[0], dtype=np.float64)
        X_tr, X_va = X[train_idx], X[val_idx]
    normalizer = None
    if config.normalize:
        normalizer = fit_normalizer(X_tr)
        X_tr = apply_normalizer(X_tr, normalizer)
        X_va = apply_normalizer(X_va, normalizer)
    origin = train_idx.copy()
    if config.smote:
        n0 = X_tr.shape[0]
        X_tr, y_tr = smote_oversample(X_tr, y_tr, k=config.smote_k, seed=seed, groups=groups)
        origin = np.concatenate([origin, np.full(X_tr.shape[0] - n0, SYNTHETIC, dtype=np.intp)])
    return FoldData(fold, train_idx, val_idx, X_tr, y_tr, origin, X_va, y_va, imputer, encoding, normalizer)


def make_folds(data, k: int, seed: int, config: PreprocessConfig) -> list[FoldData]:
    y = _labels(data)
    n = y.size
    out = []
    for f, val in enumerate(stratified_kfold(y, k, seed)):
        train = np.setdiff1d(np.arange(n), val)
        out.append(prepare_fold(data, train, val, config, derive_seed(seed, f, 0), f))
    return out


@dataclass
class CVSummary:
    model: str
    folds: list  # MetricsReport per fold
    mean: dict
    std: dict
    fold_seconds: list = field(default_factory=list)
    hyperparams: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.folds)

    def values(self, metric: str) -> list[float]:
        return [getattr(r, metric) for r in self.folds]

    @property
    def mean_seconds(self) -> float:
        return float(np.mean(self.fold_seconds)) if self.fold_seconds else 0.0

    def to_json(self, include_timings: bool = False) -> dict:
        out = {
            "model": self.model,
            "hyperparams": self.hyperparams,
            "k": self.k,
            "folds": [r.to_json() for r in self.folds],
            "mean": self.mean,
            "std": self.std,
        }
        if include_timings:
            out["fold_seconds"] = list(self.fold_seconds)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CVSummary":
        return cls(obj["model"], [MetricsReport.from_json(r) for r in obj["folds"]], dict(obj["mean"]),
                   dict(obj["std"]), list(obj.get("fold_seconds", [])), dict(obj.get("hyperparams", {})))


def summarize(model: str, reports, seconds=(), hyperparams=None) -> CVSummary:
    mean, std = {}, {}
    for m in METRIC_NAMES:
        mean[m], std[m] = mean_std([getattr(r, m) for r in reports])
    return CVSummary(model, list(reports), mean, std, list(seconds), dict(hyperparams or {}))


def _run_fold(factory, fd: FoldData, seed, cell):
    clf = factory()
    t0 = time.perf_counter()
    clf.fit(fd.X_train, fd.y_train, seed=derive_seed(seed, fd.fold, cell, 1))
    seconds = time.perf_counter() - t0
    report = score(fd.y_val, clf.predict(fd.X_val))
    return clf, report, seconds


def run_cv(factory, data, k: int = 10, seed: int = 0, config: PreprocessConfig | None = None, *,
           folds: list[FoldData] | None = None, cell: int = 0, hyperparams=None, threads: int | None = None,
           keep_models: bool = False):
    """Cross-validate ``factory()`` classifiers.

    Prepared ``folds`` may be passed in to share preprocessing between
    models. Results are returned in fold order whatever the thread count.
    With ``keep_models`` the fitted per-fold classifiers are returned too.
    """
    config = config or PreprocessConfig()
    if folds is None:
        folds = make_folds(data, k, seed, config)
    workers = min(threads or n_threads(), len(folds))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda fd: _run_fold(factory, fd, seed, cell), folds))
    else:
        results = [_run_fold(factory, fd, seed, cell) for fd in folds]
    name = results[0][0].name
    summary = summarize(name, [r[1] for r in results], [r[2] for r in results], hyperparams)
    if keep_models:
        return summary, [r[0] for r in results]
    return summary


def grid_cells(grid: dict) -> list[dict]:
    """Cartesian product in key order, then listed value order."""
    if not grid:
        raise ValueError("empty hyperparameter grid")
    keys = list(grid)
    for key in keys:
        if len(grid[key]) == 0:
            raise ValueError(f"grid entry {key!r} has no values")
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(make, grid: dict, data, k: int = 10, seed: int = 0, config: PreprocessConfig | None = None, *,
                folds: list[FoldData] | None = None, threads: int | None = None):
    """Evaluate every cell with ``run_cv``; highest mean accuracy wins.

    ``make(params)`` builds a classifier. Ties keep the earliest cell.
    Returns ``(best_params, [(params, CVSummary), ...])``.
    """
    cells = grid_cells(grid)
    config = config or PreprocessConfig()
    if folds is None:
        folds = make_folds(data, k, seed, config)
    results = []
    best, best_acc = None, -1.0
    for c, params in enumerate(cells):
        summary = run_cv(lambda p=params: make(p), data, k, seed, config, folds=folds, cell=c,
                         hyperparams=params, threads=threads)
        results.append((params, summary))
        if summary.mean["accuracy"] > best_acc:
            best, best_acc = params, summary.mean["accuracy"]
    return best, results
