"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is first checked for identical output on both back ends.
"""

import argparse
import timeit

import numpy as np

from cardiohybrid.kernels import _fallback as fallback

try:
    from cardiohybrid.kernels import _native as native
except ImportError:
    native = None


def cases(rng):
    X = rng.normal(size=(2000, 15))
    Q = rng.normal(size=(500, 15))
    g = rng.normal(size=2000)
    h = rng.random(2000) * 0.25
    rows = np.sort(rng.choice(2000, 1200, replace=False)).astype(np.intp)
    P = rng.normal(size=1_000_000)
    G = rng.normal(size=P.size)

    def adam(mod):
        p, m, v = P.copy(), np.zeros_like(P), np.zeros_like(P)
        mod.adam_update(p, G, m, v, 1e-3, 0.9, 0.999, 1e-8, 0.1, 0.001)
        return p

    def tree(mod):
        order = mod.presort(X)
        _, f, thr = mod.best_split(X, order, rows, g, h, 1.0, 0.0, 0.0)
        feature = np.array([f, -1, -1], dtype=np.intp)
        return mod.tree_predict(feature, np.array([thr, 0, 0.0]), np.array([1, -1, -1], dtype=np.intp),
                                np.array([2, -1, -1], dtype=np.intp), np.array([0.0, -1.0, 1.0]), X)

    return {
        "knn_indices (2000 x 500, k=15)": lambda mod: mod.knn_indices(X, Q, 15),
        "presort (2000 x 15)": lambda mod: mod.presort(X),
        "best_split (1200 of 2000 rows)": lambda mod: mod.best_split(X, mod.presort(X), rows, g, h, 1.0, 0.0, 0.0),
        "tree_predict (depth 1, 2000 rows)": tree,
        "adam_update (1M params)": adam,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if native is None:
        print("compiled extension not built; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':36s} {'native ms':>10s} {'python ms':>10s} {'speedup':>8s}  same")
    for name, fn in cases(rng).items():
        a, b = fn(native), fn(fallback)
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
        tn = min(timeit.repeat(lambda: fn(native), number=1, repeat=args.repeat)) * 1e3
        tp = min(timeit.repeat(lambda: fn(fallback), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:36s} {tn:10.2f} {tp:10.2f} {tp / tn:7.1f}x  {same}")


if __name__ == "__main__":
    main()
