"""Stack-level forward / backward passes and parameter bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .layers import LSTM, Conv1D, Dense, Layer, Output, ShapeError


class StaleCacheError(RuntimeError):
    pass


@dataclass(eq=False)
class ModelParams:
    layers: list  # one {name: ndarray} dict per layer
    version: int = 0
    history: list = field(default_factory=list)

    @property
    def count(self) -> int:
        return sum(a.size for p in self.layers for a in p.values())

    @property
    def final_loss(self):
        return self.history[-1] if self.history else None

    def copy(self) -> "ModelParams":
        return ModelParams([{k: v.copy() for k, v in p.items()} for p in self.layers], self.version, list(self.history))

    def flat(self) -> np.ndarray:
        return np.concatenate([a.ravel() for p in self.layers for a in p.values()]) if self.count else np.zeros(0)

    def __eq__(self, other):
        if not isinstance(other, ModelParams) or len(self.layers) != len(other.layers):
            return False
        return all(
            a.keys() == b.keys() and all(np.array_equal(a[k], b[k]) for k in a)
            for a, b in zip(self.layers, other.layers)
        )


@dataclass
class ForwardCache:
    caches: list
    logits: np.ndarray
    probs: np.ndarray
    params_id: int
    version: int


def takes_sequence(stack: Sequence[Layer]) -> bool:
    return isinstance(stack[0], (Conv1D, LSTM))


def input_shape(stack: Sequence[Layer], d: int | None):
    return ("seq", d, 1) if takes_sequence(stack) else ("vec", d)


def validate_stack(stack: Sequence[Layer], d: int | None = None):
    """Walk symbolic shapes through the stack; raise ShapeError naming the
    first incompatible layer."""
    if not stack:
        raise ShapeError("empty layer stack")
    if not isinstance(stack[-1], Output):
        raise ShapeError("the last layer must be an Output layer")
    first = stack[0]
    if isinstance(first, Dense):
        d = first.in_features if d is None else d
    shape = input_shape(stack, d)
    for i, layer in enumerate(stack):
        try:
            shape = layer.out_shape(shape)
        except ShapeError as exc:
            raise ShapeError(f"layer {i} ({type(layer).__name__}): {exc}") from None
    return shape


def param_count(stack: Sequence[Layer]) -> int:
    return sum(layer.param_count() for layer in stack)


def init_params(stack: Sequence[Layer], rng) -> ModelParams:
    return ModelParams([layer.init(rng) for layer in stack])


def _prepare_input(stack, x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    validate_stack(stack, x.shape[1])
    if takes_sequence(stack):
        x = x[:, :, None]
    return x


def forward(params: ModelParams, stack: Sequence[Layer], x) -> tuple[np.ndarray, ForwardCache]:
    """Run the stack on ``x`` of shape ``(n, d)``; returns probabilities and a cache."""
    h = _prepare_input(stack, x)
    caches = []
    for layer, p in zip(stack[:-1], params.layers[:-1]):
        h, cache = layer.forward(p, h)
        caches.append(cache)
    probs, logits = stack[-1].forward(params.layers[-1], h)
    return probs, ForwardCache(caches, logits, probs, id(params), params.version)


def predict_proba(params: ModelParams, stack: Sequence[Layer], x, chunk: int = 2048) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    parts = [forward(params, stack, x[s:s + chunk])[0] for s in range(0, x.shape[0], chunk)]
    return np.concatenate(parts) if parts else np.zeros(0)


def bce_loss(cache: ForwardCache, y) -> float:
    """Mean binary cross-entropy, evaluated from logits for stability."""
    z = cache.logits
    y = np.asarray(y, dtype=np.float64)
    return float(np.mean(np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z))) - y * z))


def backward(params: ModelParams, stack: Sequence[Layer], cache: ForwardCache, y, d_loss: float = 1.0) -> list:
    """Gradients of ``d_loss * mean BCE`` with respect to every parameter."""
    if cache.params_id != id(params) or cache.version != params.version:
        raise StaleCacheError("cache was produced by a different parameter state; rerun forward")
    y = np.asarray(y, dtype=np.float64)
    n = cache.logits.shape[0]
    dz = d_loss * (cache.probs - y) / n
    grads = [dict() for _ in stack]
    dh = dz[:, None]
    for i in range(len(stack) - 2, -1, -1):
        dh, grads[i] = stack[i].backward(params.layers[i], cache.caches[i], dh)
    return grads
