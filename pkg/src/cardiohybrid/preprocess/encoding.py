"""One-hot encoding and min-max normalization."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..ingest import MISSING, ColumnKind, RawTable

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    values: np.ndarray
    names: tuple[str, ...]
    unseen_categories: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"feature matrix must be 2-D, got shape {v.shape}")
        if v.shape[1] != len(self.names):
            raise ValueError(f"{v.shape[1]} columns but {len(self.names)} feature names")
        if not np.all(np.isfinite(v)):
            raise ValueError("feature matrix contains non-finite values")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ColumnEncoding:
    name: str
    kind: ColumnKind
    categories: tuple[str, ...] | None = None  # one-hot slots, lexicographic

    @property
    def width(self) -> int:
        return len(self.categories) if self.categories is not None else 1


@dataclass(frozen=True)
class EncodingMap:
    columns: tuple[ColumnEncoding, ...]

    @property
    def feature_names(self) -> tuple[str, ...]:
        names = []
        for col in self.columns:
            if col.categories is None:
                names.append(col.name)
            else:
                names.extend(f"{col.name}={c}" for c in col.categories)
        return tuple(names)

    @property
    def d(self) -> int:
        return sum(c.width for c in self.columns)

    def onehot_groups(self) -> list[list[int]]:
        """Column index lists of every one-hot block in the encoded matrix."""
        groups, start = [], 0
        for col in self.columns:
            if col.categories is not None:
                groups.append(list(range(start, start + col.width)))
            start += col.width
        return groups

    def to_json(self) -> dict:
        return {
            "columns": [
                {"name": c.name, "kind": c.kind.value, "categories": list(c.categories) if c.categories else None}
                for c in self.columns
            ]
        }


def fit_encoding(table: RawTable, rows=None) -> EncodingMap:
    sub = table if rows is None else table.take(rows)
    cols = []
    for name, kind in sub.descriptor.feature_columns:
        if kind is ColumnKind.NOMINAL:
            cats = sorted({v for v in sub.column(name) if v is not MISSING})
            cols.append(ColumnEncoding(name, kind, tuple(cats)))
        else:
            cols.append(ColumnEncoding(name, kind))
    return EncodingMap(tuple(cols))


def apply_encoding(table: RawTable, mapping: EncodingMap) -> FeatureMatrix:
    """Encode a table with an already-fitted map.

    Categories absent from the map become an all-zero slot group; the number
    of such cells is reported as ``unseen_categories``.
    """
    table_features = [c for c, _ in table.descriptor.feature_columns]
    map_features = [c.name for c in mapping.columns]
    if sorted(table_features) != sorted(map_features):
        raise ValueError(f"column set mismatch: table has {table_features}, encoding map has {map_features}")

    n = table.row_count
    out = np.zeros((n, mapping.d), dtype=np.float64)
    unseen = 0
    start = 0
    for col in mapping.columns:
        j = table.descriptor.index(col.name)
        values = [row[j] for row in table.rows]
        if any(v is MISSING for v in values):
            raise ValueError(f"column {col.name!r} still contains missing values; impute first")
        if col.categories is None:
            out[:, start] = np.asarray(values, dtype=np.float64)
        else:
            slot = {c: i for i, c in enumerate(col.categories)}
            for r, v in enumerate(values):
                i = slot.get(v)
                if i is None:
                    unseen += 1
                else:
                    out[r, start + i] = 1.0
        start += col.width
    if unseen:
        log.warning("%d cell(s) with categories unseen at fit time encoded as zeros", unseen)
    return FeatureMatrix(out, mapping.feature_names, unseen)


def encode(table: RawTable) -> tuple[FeatureMatrix, np.ndarray, EncodingMap]:
    mapping = fit_encoding(table)
    X = apply_encoding(table, mapping)
    y = table.labels()
    return X, y, mapping


@dataclass(frozen=True, eq=False)
class NormalizationParams:
    mins: np.ndarray
    maxs: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, NormalizationParams):
            return NotImplemented
        return np.array_equal(self.mins, other.mins) and np.array_equal(self.maxs, other.maxs)

    def __hash__(self):
        return hash((self.mins.tobytes(), self.maxs.tobytes()))

    def to_json(self) -> dict:
        return {"min": self.mins.tolist(), "max": self.maxs.tolist()}


def _as_array(X) -> np.ndarray:
    return X.values if isinstance(X, FeatureMatrix) else np.asarray(X, dtype=np.float64)


def fit_normalizer(X, rows=None) -> NormalizationParams:
    """Per-feature min / max over ``rows`` only (all rows if ``None``)."""
    A = _as_array(X)
    if rows is not None:
        rows = np.asarray(rows, dtype=np.intp)
        if rows.size == 0:
            raise ValueError("cannot fit a normalizer on an empty row subset")
        A = A[rows]
    if A.shape[0] == 0:
        raise ValueError("cannot fit a normalizer on an empty row subset")
    return NormalizationParams(A.min(axis=0).copy(), A.max(axis=0).copy())


def apply_normalizer(X, params: NormalizationParams):
    """Min-max scale; constant features map to 0 and nothing is clipped."""
    A = _as_array(X)
    if A.shape[1] != params.mins.shape[0]:
        raise ValueError(f"normalizer fitted on {params.mins.shape[0]} features, got {A.shape[1]}")
    span = params.maxs - params.mins
    safe = np.where(span > 0, span, 1.0)
    out = np.where(span > 0, (A - params.mins) / safe, 0.0)
    if isinstance(X, FeatureMatrix):
        return FeatureMatrix(out, X.names, X.unseen_categories)
    return out
