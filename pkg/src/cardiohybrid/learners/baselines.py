"""Naive Bayes, logistic regression and CART baselines."""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..nncore.layers import sigmoid
from .base import Classifier
from .gbt import RegressionTree

VARIANCE_FLOOR = 1e-9


class GaussianNBClassifier(Classifier):
    """Class-conditional independent Gaussians with empirical priors."""

    kind = "nb"

    def __init__(self, var_floor: float = VARIANCE_FLOOR):
        if not var_floor > 0:
            raise ValueError(f"var_floor must be > 0, got {var_floor!r}")
        super().__init__(var_floor=float(var_floor))
        self.var_floor = float(var_floor)

    @property
    def name(self):
        return "NB"

    def _fit(self, X, y, seed):
        self.means = np.stack([X[y == c].mean(axis=0) for c in (0, 1)])
        self.vars = np.maximum(np.stack([X[y == c].var(axis=0) for c in (0, 1)]), self.var_floor)
        self.log_prior = np.log(np.array([(y == 0).mean(), (y == 1).mean()]))

    def _joint(self, X):
        out = []
        for c in (0, 1):
            ll = -0.5 * (np.log(2 * np.pi * self.vars[c]) + (X - self.means[c]) ** 2 / self.vars[c])
            out.append(self.log_prior[c] + ll.sum(axis=1))
        return out

    def _proba(self, X):
        j0, j1 = self._joint(X)
        return sigmoid(j1 - j0)

    def param_count(self):
        return int(self.means.size + self.vars.size + 2)


class LogisticRegressionClassifier(Classifier):
    """Full-batch gradient descent on mean binary cross-entropy.

    Stops when the gradient norm drops below ``tol`` or after ``max_iter``
    steps. Weights start at zero, so the result does not depend on the seed.
    """

    kind = "lr"

    def __init__(self, learning_rate: float = 0.5, max_iter: int = 10_000, tol: float = 1e-6):
        if not learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {learning_rate!r}")
        if int(max_iter) != max_iter or max_iter < 1:
            raise ValueError(f"max_iter must be a positive integer, got {max_iter!r}")
        if not tol > 0:
            raise ValueError(f"tol must be > 0, got {tol!r}")
        super().__init__(learning_rate=float(learning_rate), max_iter=int(max_iter), tol=float(tol))
        self.learning_rate = float(learning_rate)
        self.max_iter = int(max_iter)
        self.tol = float(tol)

    @property
    def name(self):
        return "LR"

    def _fit(self, X, y, seed):
        n, d = X.shape
        w = np.zeros(d)
        b = 0.0
        yf = y.astype(np.float64)
        self.n_iter = self.max_iter
        for it in range(self.max_iter):
            r = sigmoid(X @ w + b) - yf
            gw = X.T @ r / n
            gb = r.mean()
            if np.sqrt(gw @ gw + gb * gb) < self.tol:
                self.n_iter = it
                break
            w -= self.learning_rate * gw
            b -= self.learning_rate * gb
        self.w, self.b = w, b

    def _proba(self, X):
        return sigmoid(X @ self.w + self.b)

    def param_count(self):
        return int(self.w.size + 1)


def _gini_split(X, rows, y, min_samples_leaf):
    """Best (impurity decrease, feature, threshold) over all midpoints."""
    best = (0.0, -1, 0.0)
    m = rows.size
    yr = y[rows]
    pos = yr.sum()
    parent = 1.0 - (pos / m) ** 2 - ((m - pos) / m) ** 2
    nl = np.arange(1, m)
    nr = m - nl
    ok_size = (nl >= min_samples_leaf) & (nr >= min_samples_leaf)
    for f in range(X.shape[1]):
        vals = X[rows, f]
        o = np.argsort(vals, kind="stable")
        v = vals[o]
        pl = np.cumsum(yr[o])[:-1]
        pr = pos - pl
        gl = 1.0 - (pl / nl) ** 2 - ((nl - pl) / nl) ** 2
        gr = 1.0 - (pr / nr) ** 2 - ((nr - pr) / nr) ** 2
        dec = parent - (nl * gl + nr * gr) / m
        dec = np.where((v[:-1] < v[1:]) & ok_size, dec, -np.inf)
        if dec.size == 0:
            continue
        i = int(np.argmax(dec))
        if dec[i] > best[0] + 1e-15:
            thr = (v[i] + v[i + 1]) * 0.5
            if thr <= v[i]:
                thr = v[i + 1]
            best = (float(dec[i]), f, float(thr))
    return best


class DecisionTreeClassifier(Classifier):
    """CART with Gini impurity; leaves store the positive fraction."""

    kind = "dt"

    def __init__(self, max_depth: int = 8, min_samples_leaf: int = 1):
        if int(max_depth) != max_depth or max_depth < 0:
            raise ValueError(f"max_depth must be a non-negative integer, got {max_depth!r}")
        if int(min_samples_leaf) != min_samples_leaf or min_samples_leaf < 1:
            raise ValueError(f"min_samples_leaf must be a positive integer, got {min_samples_leaf!r}")
        super().__init__(max_depth=int(max_depth), min_samples_leaf=int(min_samples_leaf))
        self.max_depth = int(max_depth)
        self.min_samples_leaf = int(min_samples_leaf)

    @property
    def name(self):
        return "DT"

    def _fit(self, X, y, seed):
        feature, threshold, left, right, value = [], [], [], [], []

        def grow(rows, depth):
            node = len(feature)
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(float(y[rows].mean()))
            if depth >= self.max_depth or rows.size < 2 or value[node] in (0.0, 1.0):
                return node
            _, f, thr = _gini_split(X, rows, y, self.min_samples_leaf)
            if f < 0:
                return node
            go_left = X[rows, f] < thr
            feature[node], threshold[node] = f, thr
            left[node] = grow(rows[go_left], depth + 1)
            right[node] = grow(rows[~go_left], depth + 1)
            return node

        grow(np.arange(X.shape[0]), 0)
        self.tree = RegressionTree(
            np.asarray(feature, dtype=np.intp),
            np.asarray(threshold, dtype=np.float64),
            np.asarray(left, dtype=np.intp),
            np.asarray(right, dtype=np.intp),
            np.asarray(value, dtype=np.float64),
        )

    def _proba(self, X):
        return kernels.tree_predict(self.tree.feature, self.tree.threshold, self.tree.left, self.tree.right,
                                    self.tree.value, X)

    def param_count(self):
        t = self.tree
        return 2 * (t.n_nodes - t.n_leaves) + t.n_leaves
