"""The contract every classifier follows."""

from __future__ import annotations

import numpy as np

from ..errors import NotFittedError


def check_binary(y) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError("labels must be one-dimensional")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")
    y = y.astype(np.int64)
    if y.min() == y.max():
        raise ValueError(f"both classes are required, got only class {int(y[0])}")
    return y


def check_matrix(X) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D feature matrix, got shape {X.shape}")
    return X


class Classifier:
    """Binary classifier with ``fit`` / ``predict_proba`` / ``predict``.

    ``predict`` is always ``predict_proba(X) >= 0.5``; subclasses only
    implement ``_fit`` and ``_proba``.
    """

    kind = ""

    def __init__(self, **hyperparams):
        self.hyperparams = dict(hyperparams)
        self.fitted = False
        self.n_features = None

    @property
    def name(self) -> str:
        return self.kind.upper()

    def fit(self, X, y, seed: int = 0) -> "Classifier":
        X = check_matrix(X)
        y = check_binary(y)
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"{X.shape[0]} rows but {y.shape[0]} labels")
        self._fit(X, y, int(seed))
        self.n_features = X.shape[1]
        self.fitted = True
        return self

    def predict_proba(self, X) -> np.ndarray:
        if not self.fitted:
            raise NotFittedError(f"{self.name} must be fitted before predicting")
        X = check_matrix(X)
        if X.shape[1] != self.n_features:
            raise ValueError(f"{self.name} was fitted on {self.n_features} features, got {X.shape[1]}")
        return np.clip(self._proba(X), 0.0, 1.0)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)

    def param_count(self):
        """Number of learned parameters, or None for instance-based models."""
        return None

    def _fit(self, X, y, seed):
        raise NotImplementedError

    def _proba(self, X):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.hyperparams})"
