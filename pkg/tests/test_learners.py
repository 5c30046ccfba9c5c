import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cardiohybrid.errors import ConfigError, NotFittedError
from cardiohybrid.learners import (
    DEFAULT_GRIDS,
    KINDS,
    DecisionTreeClassifier,
    GaussianNBClassifier,
    GBTClassifier,
    KNNClassifier,
    LogisticRegressionClassifier,
    RegressionTree,
    make_classifier,
)
from cardiohybrid.nncore import sigmoid

FAST = {"cnn": {"arch": "small", "epochs": 2, "batch_size": 8},
        "lstm": {"arch": "small", "epochs": 2, "batch_size": 8},
        "cnn_lstm": {"arch": "small", "epochs": 2, "batch_size": 8},
        "xgb": {"n_trees": 5, "max_depth": 3}, "knn": {"k": 3}}


def blobs(seed, n=60, d=4, shift=1.0):
    r = np.random.default_rng(seed)
    y = np.arange(n) % 2
    X = r.normal(size=(n, d)) + shift * y[:, None]
    return X, y


# --- the common contract ------------------------------------------------------------

@pytest.mark.parametrize("kind", KINDS)
def test_contract(kind):
    X, y = blobs(0)
    clf = make_classifier(kind, FAST.get(kind, {}))
    with pytest.raises(NotFittedError):
        clf.predict(X)
    clf.fit(X, y, seed=3)
    p = clf.predict_proba(X)
    assert p.shape == (60,) and np.all((p >= 0) & (p <= 1))
    assert np.array_equal(clf.predict(X), (p >= 0.5).astype(int))
    again = make_classifier(kind, FAST.get(kind, {})).fit(X, y, seed=3)
    assert np.array_equal(again.predict_proba(X), p)
    with pytest.raises(ValueError, match="features"):
        clf.predict_proba(X[:, :2])
    with pytest.raises(ValueError, match="both classes"):
        make_classifier(kind, FAST.get(kind, {})).fit(X, np.ones(60, dtype=int))


@settings(max_examples=15)
@given(st.integers(0, 2**31), st.sampled_from(["knn", "xgb", "nb", "lr", "dt"]))
def test_predict_agrees_with_threshold(seed, kind):
    X, y = blobs(seed, n=30, d=2, shift=0.5)
    clf = make_classifier(kind, FAST.get(kind, {})).fit(X, y)
    Q = np.random.default_rng(seed + 1).normal(size=(20, 2))
    assert np.array_equal(clf.predict(Q), (clf.predict_proba(Q) >= 0.5).astype(int))


# --- KNN ----------------------------------------------------------------------------------

def test_knn_examples():
    X = np.array([[0.0], [1.0], [2.0], [10.0]])
    y = np.array([1, 1, 0, 0])
    assert KNNClassifier(k=1).fit(X, y).predict_proba([[0.0]])[0] == 1.0
    assert KNNClassifier(k=3).fit(X, y).predict_proba([[1.0]])[0] == pytest.approx(2 / 3)
    # even k, exact tie at 0.5 goes positive
    clf = KNNClassifier(k=2).fit(X, y)
    assert clf.predict_proba([[1.5]])[0] == 0.5 and clf.predict([[1.5]])[0] == 1
    assert clf.name == "KNN(k=2)"
    with pytest.raises(ValueError):
        KNNClassifier(k=5).fit(X, y)


def knn_oracle(X, y, q, k):
    d = np.sqrt(((X - q) ** 2).sum(axis=1))
    idx = sorted(range(len(X)), key=lambda j: (d[j], j))[:k]
    return y[idx].sum() / k


@pytest.mark.parametrize("k", [1, 5, 15])
def test_knn_matches_brute_force(k, rng):
    X = rng.normal(size=(200, 3))
    y = (rng.random(200) < 0.5).astype(int)
    Q = np.vstack([rng.normal(size=(40, 3)), X[:10]])
    got = KNNClassifier(k=k).fit(X, y).predict_proba(Q)
    assert got.tolist() == [knn_oracle(X, y, q, k) for q in Q]


def test_knn_tie_break_by_index():
    X = np.array([[1.0], [-1.0], [1.0], [-1.0]])
    y = np.array([0, 1, 1, 0])
    clf = KNNClassifier(k=1).fit(X, y)
    assert clf.neighbors(np.array([[0.0]])).tolist() == [[0]]
    assert clf.predict_proba([[0.0]])[0] == 0.0


@given(st.integers(0, 2**31), st.sampled_from([1, 3, 5]))
def test_knn_permutation_invariant_without_ties(seed, k):
    r = np.random.default_rng(seed)
    X = r.normal(size=(30, 2))
    y = np.arange(30) % 2
    Q = r.normal(size=(10, 2))
    perm = r.permutation(30)
    a = KNNClassifier(k=k).fit(X, y).predict_proba(Q)
    b = KNNClassifier(k=k).fit(X[perm], y[perm]).predict_proba(Q)
    assert np.array_equal(a, b)


# --- gradient-boosted trees ------------------------------------------------------------

def test_gbt_defaults():
    clf = make_classifier("xgb", {})
    assert (clf.n_trees, clf.max_depth, clf.learning_rate, clf.lam, clf.gamma) == (100, 6, 0.1, 1.0, 0.0)


def test_gbt_hand_checked_split():
    X = np.array([[1.0], [2.0], [3.0], [4.0]])
    y = np.array([0, 0, 1, 1])
    clf = GBTClassifier(n_trees=1, max_depth=1, lam=1.0).fit(X, y)
    tree = clf.trees[0]
    assert tree.feature[0] == 0 and tree.threshold[0] == 2.5
    # base 0, p = 0.5: left G = 1, H = 0.5 -> -1 / 1.5
    assert tree.value[tree.left[0]] == pytest.approx(-2 / 3)
    assert tree.value[tree.right[0]] == pytest.approx(2 / 3)


def test_gbt_loss_non_increasing(rng):
    X = rng.normal(size=(80, 5))
    y = (X[:, 0] + 0.5 * rng.normal(size=80) > 0).astype(int)
    clf = GBTClassifier(n_trees=10, max_depth=3).fit(X, y)
    assert len(clf.history) == 11
    assert all(b <= a + 1e-15 for a, b in zip(clf.history, clf.history[1:]))


def test_gbt_zero_trees_is_prior(rng):
    X = rng.normal(size=(40, 2))
    y = (np.arange(40) < 10).astype(int)
    clf = GBTClassifier(n_trees=0).fit(X, y)
    assert np.allclose(clf.predict_proba(X), 0.25, rtol=0, atol=1e-15)


def test_gbt_leaf_only_tree_composition(rng):
    X = rng.normal(size=(10, 2))
    y = np.arange(10) % 2
    clf = GBTClassifier(n_trees=0, learning_rate=0.3).fit(X, y)
    clf.trees = [RegressionTree.from_json([{"leaf": 1.7}])]
    assert np.allclose(clf.predict_proba(X), sigmoid(np.array([clf.base_score + 0.3 * 1.7]))[0])


def walk(nodes, x):
    node = nodes[0]
    while "leaf" not in node:
        node = nodes[node["left"] if x[node["feature"]] < node["threshold"] else node["right"]]
    return node["leaf"]


def test_gbt_matches_independent_tree_walk(rng):
    X = rng.normal(size=(150, 4))
    y = ((X[:, 0] * X[:, 1] > 0) ^ (rng.random(150) < 0.1)).astype(int)
    clf = GBTClassifier(n_trees=8, max_depth=4, learning_rate=0.3).fit(X, y)
    dump = json.loads(json.dumps(clf.to_json()))
    Q = rng.normal(size=(100, 4))
    margin = [dump["base_score"] + 0.3 * sum(walk(t, q) for t in dump["trees"]) for q in Q]
    assert np.allclose(clf.predict_proba(Q), 1 / (1 + np.exp(-np.array(margin))), rtol=1e-14, atol=0)


def test_gbt_children_partition_rows(rng):
    X = rng.normal(size=(60, 3))
    y = (X[:, 2] > 0).astype(int)
    tree = GBTClassifier(n_trees=1, max_depth=3).fit(X, y).trees[0]

    def rows_at(node, rows):
        if tree.feature[node] < 0:
            return [rows]
        go = X[rows, tree.feature[node]] < tree.threshold[node]
        assert go.any() and (~go).any()
        return rows_at(tree.left[node], rows[go]) + rows_at(tree.right[node], rows[~go])

    leaves = rows_at(0, np.arange(60))
    assert sorted(np.concatenate(leaves).tolist()) == list(range(60))
    assert np.all(np.isfinite(tree.value))


def test_gbt_prefix_stability(rng):
    X = rng.normal(size=(50, 3))
    y = (X.sum(axis=1) > 0).astype(int)
    short = GBTClassifier(n_trees=3, max_depth=2).fit(X, y)
    long = GBTClassifier(n_trees=6, max_depth=2).fit(X, y)
    for a, b in zip(short.trees, long.trees):
        assert a.to_json() == b.to_json()


def test_gbt_json_round_trip(rng):
    X = rng.normal(size=(50, 3))
    y = (X[:, 0] > 0).astype(int)
    clf = GBTClassifier(n_trees=4, max_depth=2).fit(X, y)
    back = GBTClassifier.from_json(json.loads(json.dumps(clf.to_json())))
    assert np.array_equal(back.predict_proba(X), clf.predict_proba(X))
    assert clf.param_count() == sum(2 * (t.n_nodes - t.n_leaves) + t.n_leaves for t in clf.trees)


def test_gbt_rejects_bad_hyperparameters():
    with pytest.raises(ValueError):
        GBTClassifier(learning_rate=0)
    with pytest.raises(ValueError):
        GBTClassifier(max_depth=-1)


# --- baselines ----------------------------------------------------------------------------

def test_nb_symmetric_boundary_at_midpoint():
    X = np.array([[-3.0], [-2.0], [-1.0], [1.0], [2.0], [3.0]]) + 5.0
    y = np.array([0, 0, 0, 1, 1, 1])
    clf = GaussianNBClassifier().fit(X, y)
    assert abs(clf.predict_proba([[5.0]])[0] - 0.5) <= 1e-9
    assert clf.predict_proba([[4.9]])[0] < 0.5 < clf.predict_proba([[5.1]])[0]


def test_nb_variance_floor():
    X = np.array([[1.0], [1.0], [2.0], [3.0]])
    y = np.array([0, 0, 1, 1])
    clf = GaussianNBClassifier().fit(X, y)
    assert np.all(clf.vars >= 1e-9)


def test_lr_separable():
    X, y = blobs(4, n=40, d=2, shift=6.0)
    clf = LogisticRegressionClassifier().fit(X, y)
    assert np.array_equal(clf.predict(X), y)


def test_dt_depth_one_perfect_split():
    X = np.array([[0.0], [0.0], [1.0], [1.0]])
    y = np.array([0, 0, 1, 1])
    clf = DecisionTreeClassifier(max_depth=1).fit(X, y)
    assert clf.predict(X).tolist() == [0, 0, 1, 1]
    assert clf.tree.threshold[0] == 0.5


# --- factory ---------------------------------------------------------------------------------

def test_factory_names_and_errors():
    assert make_classifier("knn", {"k": 5}).name == "KNN(k=5)"
    assert make_classifier("cnn_lstm", {"arch": "small"}).name == "CNN-LSTM"
    with pytest.raises(ConfigError, match="valid kinds: knn, xgb"):
        make_classifier("svm", {})
    with pytest.raises(ConfigError, match="'depth'"):
        make_classifier("xgb", {"depth": 3})
    with pytest.raises(ConfigError, match="knn"):
        make_classifier("knn", {"k": 0})
    assert DEFAULT_GRIDS["knn"]["k"] == [3, 5, 7, 9, 11, 15]
