"""Classifier wrapper around the neural-network substrate."""

from __future__ import annotations

from .. import nncore
from .base import Classifier

NEURAL_KINDS = {"cnn": "CNN", "lstm": "LSTM", "cnn_lstm": "CNN-LSTM"}


class NeuralClassifier(Classifier):
    """One of the CNN / LSTM / CNN-LSTM stacks trained with ``nncore.train``.

    ``arch="small"`` swaps in the narrow variants, which keeps tests and
    smoke runs fast.
    """

    def __init__(self, kind: str, learning_rate: float = 1e-3, epochs: int = 60, batch_size: int = 32,
                 optimizer: str = "adam", arch: str = "default"):
        if kind not in NEURAL_KINDS:
            raise ValueError(f"unknown neural kind {kind!r}")
        if arch not in ("default", "small"):
            raise ValueError(f"arch must be 'default' or 'small', got {arch!r}")
        # validates the training hyperparameters up front
        nncore.TrainConfig(learning_rate=learning_rate, epochs=epochs, batch_size=batch_size, optimizer=optimizer)
        super().__init__(learning_rate=float(learning_rate), epochs=int(epochs), batch_size=int(batch_size),
                         optimizer=optimizer, arch=arch)
        self.kind = kind
        self.arch = arch
        self.stack = nncore.DEFAULT_STACKS[kind]() if arch == "default" else nncore.small_stack(kind)

    @property
    def name(self):
        return NEURAL_KINDS[self.kind]

    def _fit(self, X, y, seed):
        hp = self.hyperparams
        config = nncore.TrainConfig(learning_rate=hp["learning_rate"], epochs=hp["epochs"],
                                    batch_size=hp["batch_size"], optimizer=hp["optimizer"], seed=seed)
        self.params = nncore.train(self.stack, config, X, y)

    def _proba(self, X):
        return nncore.predict_proba(self.params, self.stack, X)

    def param_count(self):
        return nncore.param_count(self.stack)
