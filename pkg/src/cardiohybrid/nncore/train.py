"""Mini-batch training with SGD or Adam on binary cross-entropy."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .. import kernels
from ..errors import NumericalError
from .model import ModelParams, backward, bce_loss, forward, init_params, validate_stack


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    epochs: int = 60
    batch_size: int = 32
    optimizer: str = "adam"
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    loss: str = "bce"

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.optimizer not in ("sgd", "adam"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if self.loss != "bce":
            raise ValueError("only binary cross-entropy is supported")

    def to_json(self) -> dict:
        return asdict(self)


class Adam:
    def __init__(self, params: ModelParams, cfg: TrainConfig):
        self.cfg = cfg
        self.t = 0
        for p in params.layers:
            for k in p:
                if not p[k].flags.c_contiguous:
                    p[k] = np.ascontiguousarray(p[k])
        self.m = [{k: np.zeros_like(v) for k, v in p.items()} for p in params.layers]
        self.v = [{k: np.zeros_like(v) for k, v in p.items()} for p in params.layers]

    def step(self, params: ModelParams, grads):
        c = self.cfg
        self.t += 1
        corr1 = 1.0 - c.beta1 ** self.t
        corr2 = 1.0 - c.beta2 ** self.t
        for p, g, m, v in zip(params.layers, grads, self.m, self.v):
            for k in p:
                kernels.adam_update(p[k].reshape(-1), np.ascontiguousarray(g[k]).reshape(-1), m[k].reshape(-1),
                                    v[k].reshape(-1), c.learning_rate, c.beta1, c.beta2, c.eps, corr1, corr2)
        params.version += 1


class SGD:
    def __init__(self, params: ModelParams, cfg: TrainConfig):
        self.cfg = cfg

    def step(self, params: ModelParams, grads):
        for p, g in zip(params.layers, grads):
            for k in p:
                p[k] -= self.cfg.learning_rate * g[k]
        params.version += 1


def train(stack, config: TrainConfig, X, y) -> ModelParams:
    """Fit a fresh model; the per-epoch mean loss is kept in ``params.history``.

    Initialization and the shuffle order both derive from ``config.seed``,
    so a rerun reproduces the parameters bit for bit.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = X.shape[0]
    if n < config.batch_size:
        raise ValueError(f"need at least batch_size={config.batch_size} rows, got {n}")
    validate_stack(stack, X.shape[1])
    init_seq, shuffle_seq = np.random.SeedSequence(config.seed).spawn(2)
    params = init_params(stack, np.random.default_rng(init_seq))
    order_rng = np.random.default_rng(shuffle_seq)
    opt = Adam(params, config) if config.optimizer == "adam" else SGD(params, config)
    bs = config.batch_size
    for epoch in range(config.epochs):
        perm = order_rng.permutation(n)
        total = 0.0
        for b, start in enumerate(range(0, n, bs)):
            idx = perm[start:start + bs]
            probs, cache = forward(params, stack, X[idx])
            loss = bce_loss(cache, y[idx])
            if not np.isfinite(loss):
                raise NumericalError(f"non-finite loss at epoch {epoch + 1}, batch {b + 1}")
            total += loss * len(idx)
            opt.step(params, backward(params, stack, cache, y[idx]))
        params.history.append(total / n)
    return params
