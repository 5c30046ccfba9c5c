"""Central finite-difference check of the analytic gradients."""

import numpy as np

from .layers import Dense
from .model import backward, forward, init_params, param_count


def _bce(stack, layers, x, y):
    # same formula as model.bce_loss, but kept in the dtype of the inputs
    from .model import ModelParams

    z = forward(ModelParams(layers), stack, x)[1].logits
    return np.mean(np.maximum(z, 0) + np.log1p(np.exp(-np.abs(z))) - y * z)


def grad_check(stack, seed: int, seq_len: int = 5, batch: int = 3, h: float = 1e-5,
               precision: str = "extended") -> float:
    """Max over all parameters of ``|analytic - numeric| / max(1e-8, |analytic| + |numeric|)``.

    The analytic gradients always come from the float64 backward pass. The
    numeric side is a central difference with step ``h``; with
    ``precision="extended"`` the perturbed forward passes run in
    ``np.longdouble`` so that cancellation noise (about eps / h) stays well
    below gradients of order 1e-8. ``precision="float64"`` keeps everything
    in double precision.
    """
    if param_count(stack) >= 5000:
        raise ValueError("model too large for finite differencing (>= 5000 parameters)")
    rng = np.random.default_rng(seed)
    params = init_params(stack, rng)
    for p in params.layers:
        for k in p:
            p[k] += rng.normal(0.0, 0.2, size=p[k].shape)
    d = stack[0].in_features if isinstance(stack[0], Dense) else seq_len
    x = rng.uniform(-1.0, 1.0, size=(batch, d))
    y = rng.integers(0, 2, size=batch).astype(np.float64)

    _, cache = forward(params, stack, x)
    grads = backward(params, stack, cache, y)

    dtype = np.longdouble if precision == "extended" else np.float64
    layers = [{k: v.astype(dtype) for k, v in p.items()} for p in params.layers]
    xe, ye, he = x.astype(dtype), y.astype(dtype), dtype(h)

    worst = 0.0
    for p, g in zip(layers, grads):
        for k, arr in p.items():
            flat = arr.reshape(-1)
            gflat = g[k].reshape(-1)
            for i in range(flat.size):
                old = flat[i]
                flat[i] = old + he
                up = _bce(stack, layers, xe, ye)
                flat[i] = old - he
                down = _bce(stack, layers, xe, ye)
                flat[i] = old
                num = float((up - down) / (2 * he))
                a = float(gflat[i])
                err = abs(a - num) / max(1e-8, abs(a) + abs(num))
                worst = max(worst, err)
    return worst
