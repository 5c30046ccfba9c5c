"""Gradient-boosted regression trees on the logistic loss.

Each round fits one tree to the first and second derivatives of the log
loss at the current margins (``g = p - y``, ``h = p (1 - p)``). Splits are
found by exact greedy search over sorted feature values; a split is kept
only when its gain

    0.5 * (GL^2 / (HL + lam) + GR^2 / (HR + lam) - G^2 / (H + lam)) - gamma

is strictly positive. Leaves hold ``-G / (H + lam)`` and the margin moves by
``learning_rate`` times the leaf value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..nncore.layers import sigmoid
from .base import Classifier


@dataclass
class RegressionTree:
    """Flat node arrays; ``feature[i] == -1`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.feature.size)

    @property
    def n_leaves(self) -> int:
        return int((self.feature < 0).sum())

    def predict(self, X) -> np.ndarray:
        return kernels.tree_predict(self.feature, self.threshold, self.left, self.right, self.value,
                                    np.ascontiguousarray(X, dtype=np.float64))

    def to_json(self) -> list[dict]:
        nodes = []
        for i in range(self.n_nodes):
            if self.feature[i] < 0:
                nodes.append({"leaf": float(self.value[i])})
            else:
                nodes.append({
                    "feature": int(self.feature[i]),
                    "threshold": float(self.threshold[i]),
                    "left": int(self.left[i]),
                    "right": int(self.right[i]),
                })
        return nodes

    @classmethod
    def from_json(cls, nodes: list[dict]) -> "RegressionTree":
        n = len(nodes)
        feature = np.full(n, -1, dtype=np.intp)
        threshold = np.zeros(n)
        left = np.full(n, -1, dtype=np.intp)
        right = np.full(n, -1, dtype=np.intp)
        value = np.zeros(n)
        for i, node in enumerate(nodes):
            if "leaf" in node:
                value[i] = node["leaf"]
            else:
                feature[i], threshold[i] = node["feature"], node["threshold"]
                left[i], right[i] = node["left"], node["right"]
        return cls(feature, threshold, left, right, value)


def build_tree(X, order, g, h, *, max_depth, lam, gamma, min_child_weight) -> RegressionTree:
    """Grow one tree depth-first; node ids follow creation order."""
    feature, threshold, left, right, value = [], [], [], [], []

    def grow(rows, depth):
        node = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        f = -1
        if depth < max_depth and rows.size >= 2:
            _, f, thr = kernels.best_split(X, order, rows, g, h, lam, gamma, min_child_weight)
        if f < 0:
            value[node] = -g[rows].sum() / (h[rows].sum() + lam)
            return node
        go_left = X[rows, f] < thr
        feature[node], threshold[node] = f, thr
        left[node] = grow(rows[go_left], depth + 1)
        right[node] = grow(rows[~go_left], depth + 1)
        return node

    grow(np.arange(X.shape[0], dtype=np.intp), 0)
    return RegressionTree(
        np.asarray(feature, dtype=np.intp),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(left, dtype=np.intp),
        np.asarray(right, dtype=np.intp),
        np.asarray(value, dtype=np.float64),
    )


def log_loss(y, margin) -> float:
    return float(np.mean(np.maximum(margin, 0) + np.log1p(np.exp(-np.abs(margin))) - y * margin))


class GBTClassifier(Classifier):
    """Boosted trees with second-order leaf weights.

    ``history[r]`` is the training log loss after ``r`` rounds, so it has
    ``n_trees + 1`` entries. Fitting is deterministic; ``seed`` is accepted
    for the common contract but unused because no row or column sampling
    takes place.
    """

    kind = "xgb"

    def __init__(self, n_trees: int = 100, max_depth: int = 6, learning_rate: float = 0.1,
                 lam: float = 1.0, gamma: float = 0.0, min_child_weight: float = 0.0):
        if int(n_trees) != n_trees or n_trees < 0:
            raise ValueError(f"n_trees must be a non-negative integer, got {n_trees!r}")
        if int(max_depth) != max_depth or max_depth < 0:
            raise ValueError(f"max_depth must be a non-negative integer, got {max_depth!r}")
        if not learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {learning_rate!r}")
        if lam < 0 or gamma < 0 or min_child_weight < 0:
            raise ValueError("lam, gamma and min_child_weight must be >= 0")
        super().__init__(n_trees=int(n_trees), max_depth=int(max_depth), learning_rate=float(learning_rate),
                         lam=float(lam), gamma=float(gamma), min_child_weight=float(min_child_weight))
        self.n_trees = int(n_trees)
        self.max_depth = int(max_depth)
        self.learning_rate = float(learning_rate)
        self.lam = float(lam)
        self.gamma = float(gamma)
        self.min_child_weight = float(min_child_weight)
        self.trees: list[RegressionTree] = []
        self.history: list[float] = []

    @property
    def name(self):
        return "XGB"

    def _fit(self, X, y, seed):
        rate = y.mean()
        self.base_score = float(np.log(rate / (1.0 - rate)))
        yf = y.astype(np.float64)
        order = kernels.presort(X)
        margin = np.full(X.shape[0], self.base_score)
        self.trees = []
        self.history = [log_loss(yf, margin)]
        for _ in range(self.n_trees):
            p = sigmoid(margin)
            g = p - yf
            h = p * (1.0 - p)
            tree = build_tree(X, order, g, h, max_depth=self.max_depth, lam=self.lam, gamma=self.gamma,
                              min_child_weight=self.min_child_weight)
            self.trees.append(tree)
            margin = margin + self.learning_rate * tree.predict(X)
            self.history.append(log_loss(yf, margin))

    def margin(self, X) -> np.ndarray:
        out = np.full(X.shape[0], self.base_score)
        for tree in self.trees:
            out = out + self.learning_rate * tree.predict(X)
        return out

    def _proba(self, X):
        return sigmoid(self.margin(X))

    def param_count(self):
        # feature + threshold per split, one weight per leaf
        return sum(2 * (t.n_nodes - t.n_leaves) + t.n_leaves for t in self.trees)

    def to_json(self) -> dict:
        return {
            "hyperparams": self.hyperparams,
            "base_score": self.base_score,
            "n_features": self.n_features,
            "trees": [t.to_json() for t in self.trees],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GBTClassifier":
        model = cls(**obj["hyperparams"])
        model.base_score = float(obj["base_score"])
        model.trees = [RegressionTree.from_json(t) for t in obj["trees"]]
        model.n_features = int(obj["n_features"])
        model.fitted = True
        return model
