"""Stratified holdout splitting and subsampling."""

from __future__ import annotations

import math

import numpy as np


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def split_holdout(n: int, test_fraction: float, seed: int, y) -> tuple[np.ndarray, np.ndarray]:
    """Stratified train / test index split.

    Each class contributes ``round(count * test_fraction)`` rows to the test
    side. Both index arrays are returned sorted.
    """
    y = np.asarray(y)
    if len(y) != n:
        raise ValueError(f"label vector has {len(y)} entries, expected {n}")
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must lie strictly between 0 and 1")
    if n < 2:
        raise ValueError("need at least 2 rows to split")
    classes, counts = np.unique(y, return_counts=True)
    if len(classes) < 2:
        raise ValueError("both classes must be present")
    if counts.min() < 2:
        raise ValueError(f"class {classes[np.argmin(counts)]} has fewer than 2 members")
    rng = np.random.default_rng(seed)
    test = []
    for c in classes:
        members = rng.permutation(np.flatnonzero(y == c))
        test.append(members[:_round_half_up(len(members) * test_fraction)])
    test_idx = np.sort(np.concatenate(test))
    mask = np.ones(n, dtype=bool)
    mask[test_idx] = False
    return np.flatnonzero(mask), test_idx


def stratified_subsample(y, size: int, seed: int) -> np.ndarray:
    """Sorted indices of a class-proportional subsample of ``size`` rows.

    Per-class quotas use largest remainders, so each class count is within
    one row of its exact proportional share.
    """
    y = np.asarray(y)
    n = len(y)
    if size >= n:
        return np.arange(n)
    if size < 1:
        raise ValueError("subsample size must be positive")
    classes, counts = np.unique(y, return_counts=True)
    exact = counts * size / n
    quota = np.floor(exact).astype(int)
    remainder = exact - quota
    for i in np.argsort(-remainder, kind="stable")[: size - quota.sum()]:
        quota[i] += 1
    rng = np.random.default_rng(seed)
    picked = [rng.permutation(np.flatnonzero(y == c))[:q] for c, q in zip(classes, quota)]
    return np.sort(np.concatenate(picked))
