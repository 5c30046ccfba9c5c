"""Pure numpy versions of the compiled kernels.

Summation order mirrors ``_native.pyx`` so both back ends return identical
floats; tests compare them directly.
"""

import numpy as np

_QUERY_CHUNK = 256


def knn_indices(train, queries, k):
    train = np.ascontiguousarray(train, dtype=np.float64)
    queries = np.ascontiguousarray(queries, dtype=np.float64)
    n, d = train.shape
    if k < 1 or k > n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if queries.shape[1] != d:
        raise ValueError("query / train feature-count mismatch")
    out = np.empty((queries.shape[0], k), dtype=np.intp)
    for start in range(0, queries.shape[0], _QUERY_CHUNK):
        q = queries[start:start + _QUERY_CHUNK]
        dist = np.zeros((q.shape[0], n))
        # feature-by-feature accumulation keeps the compiled summation order
        for f in range(d):
            diff = q[:, f:f + 1] - train[None, :, f]
            dist += diff * diff
        out[start:start + q.shape[0]] = np.argsort(dist, axis=1, kind="stable")[:, :k]
    return out


def presort(X):
    return np.ascontiguousarray(np.argsort(np.asarray(X), axis=0, kind="stable").T)


def best_split(X, order, rows, g, h, lam, gamma, min_child_weight):
    rows = np.sort(np.asarray(rows, dtype=np.intp))
    best_gain, best_f, best_thr = 0.0, -1, 0.0
    if rows.size < 2:
        return best_gain, best_f, best_thr
    for f in range(X.shape[1]):
        vals = X[rows, f]
        o = np.argsort(vals, kind="stable")
        v = vals[o]
        cg = np.cumsum(g[rows[o]])
        ch = np.cumsum(h[rows[o]])
        G, H = cg[-1], ch[-1]
        GL, HL = cg[:-1], ch[:-1]
        GR, HR = G - GL, H - HL
        valid = (v[:-1] < v[1:]) & (HL >= min_child_weight) & (HR >= min_child_weight)
        if not valid.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            gain = 0.5 * (GL * GL / (HL + lam) + GR * GR / (HR + lam) - G * G / (H + lam)) - gamma
        gain = np.where(valid, gain, -np.inf)
        i = int(np.argmax(gain))
        if gain[i] > best_gain:
            thr = (v[i] + v[i + 1]) * 0.5
            if thr <= v[i]:
                thr = v[i + 1]
            best_gain, best_f, best_thr = float(gain[i]), f, float(thr)
    return best_gain, best_f, best_thr


def tree_predict(feature, threshold, left, right, value, X):
    node = np.zeros(X.shape[0], dtype=np.intp)
    rows = np.arange(X.shape[0])
    active = feature[node] >= 0
    while active.any():
        r = rows[active]
        nd = node[r]
        go_left = X[r, feature[nd]] < threshold[nd]
        node[r] = np.where(go_left, left[nd], right[nd])
        active = feature[node] >= 0
    return value[node].astype(np.float64)


def adam_update(p, g, m, v, lr, beta1, beta2, eps, corr1, corr2):
    """In-place Adam step on flat float64 arrays, rounding like the compiled loop."""
    m *= beta1
    m += (1.0 - beta1) * g
    v *= beta2
    v += (1.0 - beta2) * g * g
    step = m / corr1
    step *= lr
    denom = v / corr2
    np.sqrt(denom, out=denom)
    denom += eps
    step /= denom
    p -= step
