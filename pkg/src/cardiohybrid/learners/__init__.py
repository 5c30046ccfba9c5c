"""Classifiers sharing one fit / predict_proba / predict contract."""

from .base import Classifier
from .baselines import DecisionTreeClassifier, GaussianNBClassifier, LogisticRegressionClassifier
from .factory import DEFAULT_GRIDS, KINDS, make_classifier, valid_hyperparams
from .gbt import GBTClassifier, RegressionTree, build_tree
from .knn import KNNClassifier
from .neural import NEURAL_KINDS, NeuralClassifier

__all__ = [
    "Classifier",
    "DEFAULT_GRIDS",
    "DecisionTreeClassifier",
    "GBTClassifier",
    "GaussianNBClassifier",
    "KINDS",
    "KNNClassifier",
    "LogisticRegressionClassifier",
    "NEURAL_KINDS",
    "NeuralClassifier",
    "RegressionTree",
    "build_tree",
    "make_classifier",
    "valid_hyperparams",
]
