"""Layer specifications with their forward and backward passes.

Tensors are float64 numpy arrays, batch first. Sequence tensors have shape
``(n, length, channels)``, vector tensors ``(n, features)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import ClassVar

import numpy as np


def sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _glorot(rng, shape, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class ShapeError(ValueError):
    pass


# Symbolic shapes used for stack validation: ("seq", length, channels),
# ("vec", features) or ("prob",). length may be None (any).


@dataclass(frozen=True)
class Layer:
    kind: ClassVar[str] = ""

    def param_count(self) -> int:
        return 0

    def init(self, rng) -> dict:
        return {}

    def out_shape(self, shape):
        return shape

    def to_json(self) -> dict:
        return {"type": self.kind, **asdict(self)}


@dataclass(frozen=True)
class Dense(Layer):
    in_features: int
    out_features: int
    kind: ClassVar[str] = "dense"

    def param_count(self):
        return self.in_features * self.out_features + self.out_features

    def init(self, rng):
        return {
            "W": _glorot(rng, (self.in_features, self.out_features), self.in_features, self.out_features),
            "b": np.zeros(self.out_features),
        }

    def out_shape(self, shape):
        if shape[0] != "vec" or shape[1] != self.in_features:
            raise ShapeError(f"expected ('vec', {self.in_features}), got {shape}")
        return ("vec", self.out_features)

    def forward(self, p, x):
        return x @ p["W"] + p["b"], x

    def backward(self, p, x, dout):
        return dout @ p["W"].T, {"W": x.T @ dout, "b": dout.sum(axis=0)}


@dataclass(frozen=True)
class Conv1D(Layer):
    in_channels: int
    out_channels: int
    kernel: int
    stride: int = 1
    padding: str = "same"
    kind: ClassVar[str] = "conv1d"

    def __post_init__(self):
        if self.stride != 1 or self.padding != "same":
            raise ValueError("only stride=1 with 'same' padding is supported")

    def param_count(self):
        return self.in_channels * self.out_channels * self.kernel + self.out_channels

    def init(self, rng):
        k, ci, co = self.kernel, self.in_channels, self.out_channels
        return {"W": _glorot(rng, (k, ci, co), k * ci, k * co), "b": np.zeros(co)}

    def out_shape(self, shape):
        if shape[0] != "seq" or shape[2] != self.in_channels:
            raise ShapeError(f"expected ('seq', L, {self.in_channels}), got {shape}")
        return ("seq", shape[1], self.out_channels)

    def _pads(self):
        left = (self.kernel - 1) // 2
        return left, self.kernel - 1 - left

    def forward(self, p, x):
        n, L, ci = x.shape
        left, right = self._pads()
        xp = np.pad(x, ((0, 0), (left, right), (0, 0)))
        cols = np.stack([xp[:, j:j + L, :] for j in range(self.kernel)], axis=2).reshape(n * L, self.kernel * ci)
        out = cols @ p["W"].reshape(self.kernel * ci, self.out_channels) + p["b"]
        return out.reshape(n, L, self.out_channels), (cols, x.shape)

    def backward(self, p, cache, dout):
        cols, (n, L, ci) = cache
        k, co = self.kernel, self.out_channels
        d2 = dout.reshape(n * L, co)
        dW = (cols.T @ d2).reshape(k, ci, co)
        dcols = (d2 @ p["W"].reshape(k * ci, co).T).reshape(n, L, k, ci)
        left, _ = self._pads()
        dxp = np.zeros((n, L + k - 1, ci))
        for j in range(k):
            dxp[:, j:j + L, :] += dcols[:, :, j, :]
        return dxp[:, left:left + L, :], {"W": dW, "b": d2.sum(axis=0)}


@dataclass(frozen=True)
class LSTM(Layer):
    """Single LSTM layer; gates packed as [input, forget, cell, output]."""

    input_size: int
    hidden_size: int
    return_sequences: bool = False
    kind: ClassVar[str] = "lstm"

    def param_count(self):
        return 4 * (self.input_size + self.hidden_size + 1) * self.hidden_size

    def init(self, rng):
        h, i = self.hidden_size, self.input_size
        b = np.zeros(4 * h)
        b[h:2 * h] = 1.0
        return {
            "Wx": _glorot(rng, (i, 4 * h), i, 4 * h),
            "Wh": _glorot(rng, (h, 4 * h), h, 4 * h),
            "b": b,
        }

    def out_shape(self, shape):
        if shape[0] != "seq" or shape[2] != self.input_size:
            raise ShapeError(f"expected ('seq', L, {self.input_size}), got {shape}")
        if self.return_sequences:
            return ("seq", shape[1], self.hidden_size)
        return ("vec", self.hidden_size)

    def forward(self, p, x):
        n, L, _ = x.shape
        H = self.hidden_size
        xw = (x.reshape(n * L, -1) @ p["Wx"]).reshape(n, L, 4 * H) + p["b"]
        Wh = p["Wh"]
        dt = xw.dtype
        gates = np.empty((n, L, 4 * H), dtype=dt)
        cs = np.empty((n, L, H), dtype=dt)
        tcs = np.empty((n, L, H), dtype=dt)
        hs = np.empty((n, L, H), dtype=dt)
        h = np.zeros((n, H), dtype=dt)
        c = np.zeros((n, H), dtype=dt)
        for t in range(L):
            z = xw[:, t] + h @ Wh
            g = gates[:, t]
            g[:, :2 * H] = sigmoid(z[:, :2 * H])
            g[:, 2 * H:3 * H] = np.tanh(z[:, 2 * H:3 * H])
            g[:, 3 * H:] = sigmoid(z[:, 3 * H:])
            c = g[:, H:2 * H] * c + g[:, :H] * g[:, 2 * H:3 * H]
            tc = np.tanh(c)
            h = g[:, 3 * H:] * tc
            cs[:, t], tcs[:, t], hs[:, t] = c, tc, h
        out = hs if self.return_sequences else hs[:, -1]
        return out, (x, gates, cs, tcs, hs)

    def backward(self, p, cache, dout):
        x, gates, cs, tcs, hs = cache
        n, L, _ = x.shape
        H = self.hidden_size
        Wh = p["Wh"]
        dz = np.empty((n, L, 4 * H))
        dWh = np.zeros_like(Wh)
        dh_next = np.zeros((n, H))
        dc_next = np.zeros((n, H))
        for t in reversed(range(L)):
            if self.return_sequences:
                dh = dout[:, t] + dh_next
            elif t == L - 1:
                dh = dout + dh_next
            else:
                dh = dh_next
            g = gates[:, t]
            i, f, cc, o = g[:, :H], g[:, H:2 * H], g[:, 2 * H:3 * H], g[:, 3 * H:]
            tc = tcs[:, t]
            dc = dh * o * (1.0 - tc * tc) + dc_next
            c_prev = cs[:, t - 1] if t > 0 else np.zeros((n, H))
            dzt = dz[:, t]
            dzt[:, :H] = dc * cc * i * (1.0 - i)
            dzt[:, H:2 * H] = dc * c_prev * f * (1.0 - f)
            dzt[:, 2 * H:3 * H] = dc * i * (1.0 - cc * cc)
            dzt[:, 3 * H:] = dh * tc * o * (1.0 - o)
            dc_next = dc * f
            if t > 0:
                dWh += hs[:, t - 1].T @ dzt
            dh_next = dzt @ Wh.T
        dz2 = dz.reshape(n * L, 4 * H)
        grads = {
            "Wx": x.reshape(n * L, -1).T @ dz2,
            "Wh": dWh,
            "b": dz2.sum(axis=0),
        }
        dx = (dz2 @ p["Wx"].T).reshape(x.shape)
        return dx, grads


@dataclass(frozen=True)
class Activation(Layer):
    fn: str = "relu"
    kind: ClassVar[str] = "activation"

    def __post_init__(self):
        if self.fn not in ("relu", "sigmoid", "tanh"):
            raise ValueError(f"unknown activation {self.fn!r}")

    def forward(self, p, x):
        if self.fn == "relu":
            out = np.maximum(x, 0.0)
        elif self.fn == "sigmoid":
            out = sigmoid(x)
        else:
            out = np.tanh(x)
        return out, (x, out)

    def backward(self, p, cache, dout):
        x, out = cache
        if self.fn == "relu":
            return dout * (x > 0), {}
        if self.fn == "sigmoid":
            return dout * out * (1.0 - out), {}
        return dout * (1.0 - out * out), {}


@dataclass(frozen=True)
class GlobalAvgPool1D(Layer):
    kind: ClassVar[str] = "gap1d"

    def out_shape(self, shape):
        if shape[0] != "seq":
            raise ShapeError(f"expected a sequence input, got {shape}")
        return ("vec", shape[2])

    def forward(self, p, x):
        return x.mean(axis=1), x.shape

    def backward(self, p, shape, dout):
        n, L, c = shape
        return np.broadcast_to(dout[:, None, :] / L, shape).copy(), {}


@dataclass(frozen=True)
class Output(Layer):
    """Sigmoid head turning an ``(n, 1)`` logit into ``n`` probabilities."""

    fn: str = "sigmoid"
    kind: ClassVar[str] = "output"

    def __post_init__(self):
        if self.fn != "sigmoid":
            raise ValueError("only a sigmoid output is supported")

    def out_shape(self, shape):
        if shape != ("vec", 1):
            raise ShapeError(f"expected ('vec', 1), got {shape}")
        return ("prob",)

    def forward(self, p, x):
        z = x[:, 0]
        return sigmoid(z), z


LAYER_TYPES = {cls.kind: cls for cls in (Dense, Conv1D, LSTM, Activation, GlobalAvgPool1D, Output)}


def layer_from_json(obj: dict) -> Layer:
    obj = dict(obj)
    cls = LAYER_TYPES[obj.pop("type")]
    return cls(**obj)
