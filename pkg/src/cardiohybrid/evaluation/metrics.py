"""Confusion counts, the five classification metrics and mean / std."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

METRIC_NAMES = ("accuracy", "precision", "recall", "f1", "specificity")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def to_json(self) -> dict:
        return {"tp": self.tp, "tn": self.tn, "fp": self.fp, "fn": self.fn}


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    specificity: float
    degenerate: dict = field(default_factory=dict)  # metric -> True when its denominator was 0

    def as_dict(self) -> dict:
        return {m: getattr(self, m) for m in METRIC_NAMES}

    def to_json(self) -> dict:
        return {**self.as_dict(), "degenerate": sorted(k for k, v in self.degenerate.items() if v)}

    @classmethod
    def from_json(cls, obj: dict) -> "MetricsReport":
        flags = {m: m in obj.get("degenerate", ()) for m in METRIC_NAMES}
        return cls(*(float(obj[m]) for m in METRIC_NAMES), degenerate=flags)


def _binary(a, what):
    a = np.asarray(a)
    if a.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional")
    if not np.isin(a, (0, 1)).all():
        raise ValueError(f"{what} contains a value other than 0 and 1")
    return a.astype(np.int64)


def confusion(y_true, y_pred) -> ConfusionMatrix:
    t = _binary(y_true, "y_true")
    p = _binary(y_pred, "y_pred")
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.size} true labels, {p.size} predictions")
    tp = int(np.sum((t == 1) & (p == 1)))
    tn = int(np.sum((t == 0) & (p == 0)))
    fp = int(np.sum((t == 0) & (p == 1)))
    fn = int(np.sum((t == 1) & (p == 0)))
    return ConfusionMatrix(tp, tn, fp, fn)


def _ratio(num, den):
    return (num / den, False) if den > 0 else (0.0, True)


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy, precision, recall, F1 and specificity.

    A zero denominator gives 0 and sets the metric's degenerate flag.
    """
    if cm.total == 0:
        raise ValueError("cannot score an empty confusion matrix")
    acc, _ = _ratio(cm.tp + cm.tn, cm.total)
    prec, dp = _ratio(cm.tp, cm.tp + cm.fp)
    rec, dr = _ratio(cm.tp, cm.tp + cm.fn)
    f1, df = _ratio(2 * prec * rec, prec + rec)
    spec, ds = _ratio(cm.tn, cm.tn + cm.fp)
    flags = {"accuracy": False, "precision": dp, "recall": dr, "f1": df or dp or dr, "specificity": ds}
    return MetricsReport(acc, prec, rec, f1, spec, flags)


def score(y_true, y_pred) -> MetricsReport:
    return metrics(confusion(y_true, y_pred))


def mean_std(values) -> tuple[float, float]:
    """Arithmetic mean and sample standard deviation (n - 1 denominator)."""
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size < 2:
        raise ValueError(f"need at least 2 values, got {v.size}")
    m = float(v.mean())
    return m, float(math.sqrt(((v - m) ** 2).sum() / (v.size - 1)))
