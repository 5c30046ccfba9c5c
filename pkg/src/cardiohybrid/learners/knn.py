"""Brute-force k-nearest-neighbor classifier."""

import numpy as np

from .. import kernels
from .base import Classifier


class KNNClassifier(Classifier):
    """Fraction of positive labels among the ``k`` nearest training rows.

    Distances are Euclidean (compared squared); equal distances go to the
    lower training-row index.
    """

    kind = "knn"

    def __init__(self, k: int = 5):
        if int(k) != k or k < 1:
            raise ValueError(f"k must be a positive integer, got {k!r}")
        super().__init__(k=int(k))
        self.k = int(k)

    @property
    def name(self):
        return f"KNN(k={self.k})"

    def _fit(self, X, y, seed):
        if self.k > X.shape[0]:
            raise ValueError(f"k={self.k} exceeds the {X.shape[0]} training rows")
        self.X_train = X.copy()
        self.y_train = y.copy()

    def neighbors(self, X) -> np.ndarray:
        return kernels.knn_indices(self.X_train, np.ascontiguousarray(X, dtype=np.float64), self.k)

    def _proba(self, X):
        idx = self.neighbors(X)
        return self.y_train[idx].sum(axis=1) / self.k
