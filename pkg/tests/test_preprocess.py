import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cardiohybrid.ingest import MISSING, ColumnKind, DatasetDescriptor, RawTable, builtin_descriptor, synth_generate
from cardiohybrid.preprocess import (
    BPCategory,
    Imputer,
    NormalizationParams,
    OutlierRules,
    age_days_to_years,
    apply_encoding,
    apply_normalizer,
    categorize_bp,
    clean_table,
    deduplicate,
    encode,
    filter_outliers,
    fit_encoding,
    fit_normalizer,
    smote_oversample,
    split_holdout,
    stratified_subsample,
)
from cardiohybrid.preprocess.cleaning import row_passes
from cardiohybrid.preprocess.smote import minority_neighbors

SMALL = DatasetDescriptor(
    "small",
    (("id", ColumnKind.IDENTIFIER), ("x", ColumnKind.CONTINUOUS), ("c", ColumnKind.NOMINAL),
     ("y", ColumnKind.TARGET)),
    3,
)


def table(rows, desc=SMALL):
    return RawTable(desc, tuple(tuple(r) for r in rows))


# --- deduplication -------------------------------------------------------------

def test_dedup_identity_and_first_kept():
    t = table([("1", 1.0, "a", 0), ("2", 2.0, "b", 1)])
    assert deduplicate(t) == t
    t2 = table([("1", 1.0, "a", 0), ("2", 1.0, "a", 0)])
    assert deduplicate(t2).rows == (("1", 1.0, "a", 0),)


def test_dedup_planted_duplicates_against_pairwise_oracle():
    base = [(str(i), float(i), "abc"[i % 3], i % 2) for i in range(7)]
    planted = [("90", 2.0, "c", 0), ("91", 5.0, "c", 1), ("92", 0.0, "a", 0)]
    rows = base[:3] + [planted[0]] + base[3:] + planted[1:]
    out = deduplicate(table(rows))
    keep = [r for i, r in enumerate(rows) if not any(r[1:] == rows[j][1:] for j in range(i))]
    assert out.row_count == 7
    assert list(out.rows) == keep


@given(st.lists(st.tuples(st.integers(0, 3), st.sampled_from("ab"), st.integers(0, 1)), max_size=30))
def test_dedup_idempotent(cells):
    t = table([(str(i), float(x), c, y) for i, (x, c, y) in enumerate(cells)])
    once = deduplicate(t)
    assert deduplicate(once) == once


# --- outliers ----------------------------------------------------------------------

def cardio_row(ap_hi=120.0, ap_lo=80.0, age=50.0):
    return ("0", age, "1", 170.0, 70.0, ap_hi, ap_lo, 1.0, 1.0, 0.0, 0.0, 1.0, 0)


def test_filter_empty_rules_identity():
    t = table([cardio_row()], builtin_descriptor("dataset1"))
    out, removed = filter_outliers(t, OutlierRules())
    assert out == t and removed == 0


def test_filter_default_rules_examples():
    d = builtin_descriptor("dataset1")
    t = table([cardio_row(), cardio_row(ap_hi=16020.0), cardio_row(ap_hi=100.0, ap_lo=120.0)], d)
    out, removed = filter_outliers(t, OutlierRules.dataset1_default())
    assert out.rows == (cardio_row(),)
    assert removed == 2


def test_filter_unknown_column():
    with pytest.raises(KeyError):
        filter_outliers(table([("1", 1.0, "a", 0)]), OutlierRules({"nope": (0, 1)}))


def test_rules_validation_and_json():
    with pytest.raises(ValueError):
        OutlierRules({"x": (5, 1)})
    with pytest.raises(ValueError):
        OutlierRules({}, ("x=>y",))
    r = OutlierRules.dataset1_default()
    assert OutlierRules.from_json(r.to_json()) == r
    assert r.to_json()["relational"] == ["ap_hi>ap_lo"]


@given(st.lists(st.tuples(st.floats(0, 300), st.floats(0, 300)), max_size=25))
def test_filter_output_satisfies_rules(pairs):
    d = builtin_descriptor("dataset1")
    t = table([cardio_row(hi, lo) for hi, lo in pairs], d)
    rules = OutlierRules.dataset1_default()
    out, removed = filter_outliers(t, rules)
    index = {c: d.names.index(c) for c in rules.columns}
    assert all(row_passes(r, rules, index) for r in out.rows)
    assert removed == t.row_count - out.row_count


# --- age and blood pressure ------------------------------------------------------

@pytest.mark.parametrize("days, years", [(0, 0), (18250, 49), (18263, 50), (365, 0), (366, 1)])
def test_age_conversion(days, years):
    assert age_days_to_years(days) == years


def test_age_negative():
    with pytest.raises(ValueError):
        age_days_to_years(-1)


@pytest.mark.parametrize("sys_, dia, cat", [
    (118, 78, BPCategory.NORMAL),
    (125, 79, BPCategory.ELEVATED),
    (185, 70, BPCategory.CRISIS),
    (119, 80, BPCategory.STAGE1),
    (130, 70, BPCategory.STAGE1),
    (139, 89, BPCategory.STAGE1),
    (140, 60, BPCategory.STAGE2),
    (110, 90, BPCategory.STAGE2),
    (180, 120, BPCategory.STAGE2),
    (181, 80, BPCategory.CRISIS),
    (150, 121, BPCategory.CRISIS),
])
def test_bp_examples(sys_, dia, cat):
    assert categorize_bp(sys_, dia) is cat


def _bp_oracle(s, d):
    # guideline table, every category that matches; the most severe is taken
    matches = []
    if s < 120 and d < 80:
        matches.append(0)
    if 120 <= s < 130 and d < 80:
        matches.append(1)
    if 130 <= s < 140 or 80 <= d < 90:
        matches.append(2)
    if s >= 140 or d >= 90:
        matches.append(3)
    if s > 180 or d > 120:
        matches.append(4)
    return max(matches)


def test_bp_exhaustive_boundary_oracle():
    grid = [50, 119, 119.5, 120, 129, 129.9, 130, 139, 139.5, 140, 180, 180.5, 181, 250]
    dgrid = [30, 79, 79.5, 80, 89, 89.5, 90, 120, 120.5, 121, 160]
    for s, d in itertools.product(grid, dgrid):
        assert int(categorize_bp(s, d)) == _bp_oracle(s, d), (s, d)


@given(st.floats(1, 300), st.floats(1, 300), st.floats(0, 100))
def test_bp_monotone(s, d, bump):
    assert categorize_bp(s + bump, d) >= categorize_bp(s, d)
    assert categorize_bp(s, d + bump) >= categorize_bp(s, d)


def test_bp_rejects_non_positive():
    with pytest.raises(ValueError):
        categorize_bp(0, 80)


def test_clean_table_converts_age_before_age_bounds():
    d = builtin_descriptor("dataset1")
    rows = [("0", 18393.0, "2", 168.0, 62.0, 110.0, 80.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1),
            ("1", 18393.0, "2", 168.0, 62.0, 110.0, 80.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1),  # duplicate but for id
            ("2", 5000.0, "1", 170.0, 60.0, 120.0, 80.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0),  # 13 years old
            ("3", 20000.0, "1", 170.0, 60.0, -120.0, 80.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0)]  # negative BP
    out, rep = clean_table(table(rows, d), OutlierRules.dataset1_default())
    assert rep.to_json() == {"loaded": 4, "missing_target": 0, "duplicates": 1, "outliers": 2, "retained": 1}
    assert out.rows[0][1] == 50.0
    assert out.descriptor.names[7] == "bp_category"
    assert out.rows[0][7] == float(BPCategory.STAGE1)


def test_synthetic_cardio_rows_survive_default_rules():
    t = synth_generate(builtin_descriptor("dataset1"), 500, 0.5, 3)
    out, rep = clean_table(t, OutlierRules.dataset1_default())
    ages = np.array(out.column("age"))
    assert rep.outliers == 0 and ages.min() >= 18 and ages.max() <= 100


# --- imputation ---------------------------------------------------------------------

def test_imputer_median_and_mode_from_fit_rows_only():
    t = table([("0", 1.0, "b", 0), ("1", 3.0, "b", 1), ("2", MISSING, MISSING, 0), ("3", 100.0, "a", 1),
               ("4", 7.0, "a", 0)])
    imp = Imputer.fit(t, [0, 1, 2, 4])
    assert imp.fill == {"x": 3.0, "c": "b"}
    out = imp.apply(t)
    assert out.rows[2][1:3] == (3.0, "b")


def test_imputer_mode_ties_take_smallest():
    t = table([("0", 1.0, "b", 0), ("1", 2.0, "a", 1)])
    assert Imputer.fit(t).fill["c"] == "a"


# --- encoding -----------------------------------------------------------------------

def test_numeric_only_encoding_is_identity():
    d = DatasetDescriptor("n", (("a", ColumnKind.CONTINUOUS), ("b", ColumnKind.ORDINAL),
                                ("t", ColumnKind.TARGET)), 3)
    rows = [(1.5, 2.0, 0), (-3.0, 1.0, 1)]
    X, y, _ = encode(table(rows, d))
    assert np.array_equal(X.values, [[1.5, 2.0], [-3.0, 1.0]])
    assert y.tolist() == [0, 1]


def test_nominal_columns_are_lexicographic_one_hot():
    t = table([("0", 1.0, "C", 0), ("1", 2.0, "A", 1), ("2", 3.0, "B", 0)])
    X, _, m = encode(t)
    assert m.feature_names == ("x", "c=A", "c=B", "c=C")
    assert X.values[:, 1:].tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    assert m.onehot_groups() == [[1, 2, 3]]


def test_dataset2_one_hot_rows_sum_to_one():
    t = synth_generate(builtin_descriptor("dataset2"), 60, 0.5, 0)
    X, _, m = encode(t)
    for g in m.onehot_groups():
        assert np.array_equal(X.values[:, g].sum(axis=1), np.ones(60))
    i = t.column("ChestPainType").index("ATA")
    slots = [j for j, n in enumerate(m.feature_names) if n.startswith("ChestPainType=")]
    assert X.values[i, slots].sum() == 1 and X.values[i, m.feature_names.index("ChestPainType=ATA")] == 1


def test_apply_encoding_same_table_and_unseen():
    t = table([("0", 1.0, "a", 0), ("1", 2.0, "b", 1)])
    X, _, m = encode(t)
    assert np.array_equal(apply_encoding(t, m).values, X.values)
    t2 = table([("0", 1.0, "x", 0), ("1", 2.0, "b", 1), ("2", 2.0, "zz", 1)])
    X2 = apply_encoding(t2, m)
    assert X2.values[0, 1:].tolist() == [0, 0]
    assert X2.unseen_categories == 2


def test_apply_encoding_column_mismatch():
    _, _, m = encode(table([("0", 1.0, "a", 0)]))
    other = synth_generate(builtin_descriptor("dataset2"), 3, 0.5, 0)
    with pytest.raises(ValueError, match="mismatch"):
        apply_encoding(other, m)


def test_fit_encoding_ignores_rows_outside_subset():
    t = table([("0", 1.0, "a", 0), ("1", 2.0, "b", 1), ("2", 1e6, "SENTINEL", 1)])
    assert fit_encoding(t, [0, 1]) == fit_encoding(t.take([0, 1]))


# --- normalization ------------------------------------------------------------------

def test_normalizer_examples():
    p = fit_normalizer(np.array([[3.0, -1.0]]))
    assert p.mins.tolist() == p.maxs.tolist() == [3.0, -1.0]
    p = fit_normalizer(np.array([[0.0], [10.0]]))
    assert (p.mins[0], p.maxs[0]) == (0.0, 10.0)
    assert apply_normalizer(np.array([[0.0], [10.0], [5.0], [20.0]]), p).ravel().tolist() == [0.0, 1.0, 0.5, 2.0]


def test_normalizer_constant_feature_and_sentinel():
    X = np.array([[1.0, 4.0], [2.0, 4.0], [1e6, 4.0]])
    p = fit_normalizer(X, [0, 1])
    assert p == fit_normalizer(X[:2])
    out = apply_normalizer(X, p)
    assert np.all(out[:, 1] == 0.0)


def test_normalizer_errors():
    with pytest.raises(ValueError):
        fit_normalizer(np.zeros((3, 2)), [])
    with pytest.raises(ValueError):
        apply_normalizer(np.zeros((2, 3)), NormalizationParams(np.zeros(2), np.ones(2)))


@given(st.integers(0, 2**31), st.integers(1, 30), st.integers(1, 6))
def test_normalizer_round_trip_and_range(seed, n, d):
    r = np.random.default_rng(seed)
    X = r.normal(0, 100, size=(n, d))
    p = fit_normalizer(X)
    Z = apply_normalizer(X, p)
    span = p.maxs - p.mins
    varying = span > 0
    back = p.mins + Z * span
    assert np.allclose(back[:, varying], X[:, varying], rtol=0, atol=1e-12 * max(1.0, np.abs(X).max()))
    assert np.all((Z[:, varying] >= 0.0) & (Z[:, varying] <= 1.0))


# --- SMOTE -------------------------------------------------------------------------

def _on_segment(s, a, b, tol=1e-9):
    ab = b - a
    denom = ab @ ab
    if denom == 0:
        return np.allclose(s, a, atol=tol)
    lam = (s - a) @ ab / denom
    return -tol <= lam <= 1 + tol and np.allclose(a + lam * ab, s, atol=tol)


def test_smote_balanced_unchanged():
    X = np.arange(8.0).reshape(4, 2)
    y = np.array([0, 1, 0, 1])
    Xo, yo = smote_oversample(X, y)
    assert np.array_equal(Xo, X) and np.array_equal(yo, y)


def test_smote_two_minority_points_stay_on_segment():
    X = np.vstack([np.random.default_rng(0).normal(size=(6, 2)), [[0.0, 0.0], [2.0, 1.0]]])
    y = np.array([0] * 6 + [1, 1])
    Xo, yo = smote_oversample(X, y, k=1, seed=4)
    assert (yo == 1).sum() == 6
    for s in Xo[8:]:
        assert _on_segment(s, X[6], X[7])


def test_smote_counts_bounding_box_and_membership(rng):
    X = np.vstack([rng.normal(0, 1, size=(100, 3)), rng.normal(2, 1, size=(40, 3))])
    y = np.array([0] * 100 + [1] * 40)
    Xo, yo = smote_oversample(X, y, k=5, seed=11)
    assert np.bincount(yo).tolist() == [100, 100]
    assert np.array_equal(Xo[:140], X)
    synth = Xo[140:]
    assert synth.shape[0] == 60
    Xm = X[100:]
    assert np.all(synth >= Xm.min(axis=0) - 1e-12) and np.all(synth <= Xm.max(axis=0) + 1e-12)
    nn = minority_neighbors(Xm, 5)
    for s in synth:
        assert any(_on_segment(s, Xm[i], Xm[j]) for i in range(40) for j in nn[i])


def test_smote_deterministic_and_errors(rng):
    X = rng.normal(size=(30, 2))
    y = np.array([0] * 25 + [1] * 5)
    a = smote_oversample(X, y, k=3, seed=3)
    b = smote_oversample(X, y, k=3, seed=3)
    assert np.array_equal(a[0], b[0])
    with pytest.raises(ValueError):
        smote_oversample(X, np.array([0] * 29 + [1]))
    with pytest.warns(UserWarning, match="using k=4"):
        smote_oversample(X, y, k=5)


def test_smote_snaps_one_hot_groups(rng):
    X = np.zeros((20, 3))
    X[:, 0] = rng.random(20)
    cats = rng.integers(0, 2, size=20)
    X[np.arange(20), 1 + cats] = 1.0
    y = np.array([0] * 14 + [1] * 6)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        Xo, _ = smote_oversample(X, y, k=3, seed=2, groups=[[1, 2]])
    assert set(map(tuple, Xo[20:, 1:])) <= {(0.0, 1.0), (1.0, 0.0)}


# --- splitting ----------------------------------------------------------------------

def test_holdout_small_balanced():
    y = np.array([0, 1] * 5)
    tr, te = split_holdout(10, 0.2, 0, y)
    assert len(tr) == 8 and len(te) == 2 and y[te].sum() == 1
    tr2, te2 = split_holdout(10, 0.2, 0, y)
    assert np.array_equal(te, te2)


def test_holdout_large_rounding():
    # a class split close to the cleaned cardio table
    y = np.array([1] * 30_857 + [0] * 31_410)
    tr, te = split_holdout(62_267, 0.2, 5, y)
    assert len(te) in (12_453, 12_454)
    assert abs(y[te].sum() - 30_857 * 0.2) <= 1


@given(st.integers(0, 2**31), st.integers(4, 200), st.floats(0.05, 0.95))
def test_holdout_partition(seed, n, frac):
    y = np.random.default_rng(seed).integers(0, 2, n)
    y[:2], y[2:4] = 0, 1
    tr, te = split_holdout(n, frac, seed, y)
    assert np.array_equal(np.sort(np.concatenate([tr, te])), np.arange(n))
    for c in (0, 1):
        cnt = (y == c).sum()
        assert abs((y[te] == c).sum() - cnt * frac) <= 1


def test_holdout_errors():
    with pytest.raises(ValueError):
        split_holdout(5, 0.2, 0, np.array([0, 0, 0, 0, 1]))
    with pytest.raises(ValueError):
        split_holdout(4, 1.0, 0, np.array([0, 0, 1, 1]))


@given(st.integers(0, 2**31), st.integers(10, 300), st.integers(2, 300))
def test_stratified_subsample_ratio(seed, n, size):
    y = (np.random.default_rng(seed).random(n) < 0.35).astype(int)
    idx = stratified_subsample(y, size, seed)
    m = min(size, n)
    assert len(idx) == m and len(set(idx.tolist())) == m
    assert abs(y[idx].sum() - y.sum() * m / n) <= 1
