"""SMOTE oversampling of the minority class."""

from __future__ import annotations

import warnings

import numpy as np

from .. import kernels


def minority_neighbors(Xm: np.ndarray, k: int) -> np.ndarray:
    """Indices of the ``k`` nearest other minority rows for every minority row.

    Ties go to the lower index; a row is never its own neighbor even when
    exact duplicates exist.
    """
    m = Xm.shape[0]
    raw = kernels.knn_indices(Xm, Xm, min(k + 1, m))
    out = np.empty((m, k), dtype=np.intp)
    for i in range(m):
        row = raw[i][raw[i] != i]
        out[i] = row[:k]
    return out


def smote_oversample(X, y, k: int = 5, seed: int = 0, groups=None):
    """Balance a binary problem by interpolating new minority rows.

    Each synthetic row is ``x_i + lam * (x_nn - x_i)`` for a minority row
    ``x_i``, one of its ``k`` nearest minority neighbors ``x_nn`` and
    ``lam ~ U[0, 1)``. Columns listed in ``groups`` (one-hot blocks) are
    copied from whichever parent is nearer in ``lam`` instead.

    Returns ``(X_out, y_out)``; the original rows come first, unchanged, and
    the synthetic rows are appended after them.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = np.bincount(y, minlength=2)
    if counts[0] == counts[1]:
        return X.copy(), y.copy()
    minority = int(np.argmin(counts))
    n_min, n_maj = int(counts[minority]), int(counts[1 - minority])
    if n_min < 2:
        raise ValueError(f"SMOTE needs at least 2 minority samples, got {n_min}")
    if k >= n_min:
        warnings.warn(f"k={k} >= minority size {n_min}; using k={n_min - 1}", stacklevel=2)
        k = n_min - 1

    idx_min = np.flatnonzero(y == minority)
    Xm = X[idx_min]
    nn = minority_neighbors(Xm, k)

    n_new = n_maj - n_min
    rng = np.random.default_rng(seed)
    base = rng.integers(0, n_min, size=n_new)
    pick = rng.integers(0, k, size=n_new)
    lam = rng.random(n_new)[:, None]
    a = Xm[base]
    b = Xm[nn[base, pick]]
    synth = a + lam * (b - a)
    if groups:
        nearer_b = lam[:, 0] >= 0.5
        for cols in groups:
            cols = np.asarray(cols, dtype=np.intp)
            synth[:, cols] = np.where(nearer_b[:, None], b[:, cols], a[:, cols])
    X_out = np.vstack([X, synth])
    y_out = np.concatenate([y, np.full(n_new, minority, dtype=np.int64)])
    return X_out, y_out
