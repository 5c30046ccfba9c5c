"""Construct classifiers by kind name, with default search grids."""

from __future__ import annotations

import inspect

from ..errors import ConfigError
from .baselines import DecisionTreeClassifier, GaussianNBClassifier, LogisticRegressionClassifier
from .gbt import GBTClassifier
from .knn import KNNClassifier
from .neural import NeuralClassifier

_CLASSES = {
    "knn": KNNClassifier,
    "xgb": GBTClassifier,
    "nb": GaussianNBClassifier,
    "lr": LogisticRegressionClassifier,
    "dt": DecisionTreeClassifier,
    "cnn": NeuralClassifier,
    "lstm": NeuralClassifier,
    "cnn_lstm": NeuralClassifier,
}
KINDS = tuple(_CLASSES)

DEFAULT_GRIDS = {
    "knn": {"k": [3, 5, 7, 9, 11, 15]},
    "xgb": {"max_depth": [3, 4, 6], "learning_rate": [0.05, 0.1, 0.3], "n_trees": [50, 100, 200]},
    "cnn": {"learning_rate": [1e-3, 3e-4], "epochs": [40, 60]},
    "lstm": {"learning_rate": [1e-3, 3e-4], "epochs": [40, 60]},
    "cnn_lstm": {"learning_rate": [1e-3, 3e-4], "epochs": [40, 60]},
}


def valid_hyperparams(kind: str) -> list[str]:
    if kind not in _CLASSES:
        raise ConfigError(f"unknown classifier kind {kind!r}; valid kinds: {', '.join(KINDS)}")
    names = list(inspect.signature(_CLASSES[kind].__init__).parameters)[1:]
    return [n for n in names if n != "kind"]


def make_classifier(kind: str, hyperparams: dict | None = None):
    """Return an unfitted classifier of ``kind``.

    Unknown kinds and unknown or out-of-range hyperparameters raise
    ConfigError naming the offender.
    """
    allowed = valid_hyperparams(kind)
    hyperparams = dict(hyperparams or {})
    for key in hyperparams:
        if key not in allowed:
            raise ConfigError(f"{kind}: unknown hyperparameter {key!r}; valid: {', '.join(allowed)}")
    cls = _CLASSES[kind]
    try:
        if cls is NeuralClassifier:
            return cls(kind, **hyperparams)
        return cls(**hyperparams)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{kind}: invalid hyperparameter: {exc}") from None
