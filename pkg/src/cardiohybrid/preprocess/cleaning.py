"""Row-level cleaning: duplicates, outliers, missing values and the
dataset-specific age / blood-pressure transforms."""

from __future__ import annotations

import enum
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..ingest import MISSING, ColumnKind, RawTable


def drop_missing_target(table: RawTable) -> RawTable:
    j = table.descriptor.index(table.descriptor.target)
    return table.replace_rows(r for r in table.rows if r[j] is not MISSING)


def deduplicate(table: RawTable) -> RawTable:
    """Drop rows identical to an earlier row on every non-identifier column.

    The first occurrence is kept and relative order is preserved.
    """
    keep = [j for j, (_, k) in enumerate(table.descriptor.columns) if k is not ColumnKind.IDENTIFIER]
    seen = set()
    out = []
    for row in table.rows:
        key = tuple(row[j] for j in keep)
        if key in seen:
            continue
        seen.add(key)
        out.append(row)
    return table.replace_rows(out)


_RELATION = re.compile(r"^\s*([A-Za-z_][\w]*)\s*(>=|<=|>|<)\s*([A-Za-z_][\w]*)\s*$")
_OPS = {
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
}


@dataclass(frozen=True)
class OutlierRules:
    """Inclusive per-column bounds plus pairwise column relations.

    Relations are strings such as ``"ap_hi>ap_lo"``; a row is kept only if
    every relation holds. Missing cells are not judged by any rule.
    """

    bounds: dict = field(default_factory=dict)
    relational: tuple = ()

    def __post_init__(self):
        for name, (lo, hi) in self.bounds.items():
            if lo > hi:
                raise ValueError(f"bound for {name!r} has lo > hi: [{lo}, {hi}]")
        for rel in self.relational:
            if not _RELATION.match(rel):
                raise ValueError(f"cannot parse relational rule {rel!r}")

    @property
    def columns(self) -> set[str]:
        cols = set(self.bounds)
        for rel in self.relational:
            left, _, right = _RELATION.match(rel).groups()
            cols.update((left, right))
        return cols

    def to_json(self) -> dict:
        return {"bounds": {k: [lo, hi] for k, (lo, hi) in self.bounds.items()}, "relational": list(self.relational)}

    @classmethod
    def from_json(cls, obj) -> "OutlierRules":
        if isinstance(obj, str):
            obj = json.loads(obj)
        bounds = {str(k): (float(v[0]), float(v[1])) for k, v in obj.get("bounds", {}).items()}
        return cls(bounds, tuple(obj.get("relational", ())))

    @classmethod
    def dataset1_default(cls) -> "OutlierRules":
        # `age` is checked in years, after age_days_to_years
        return cls(
            {
                "ap_hi": (60.0, 250.0),
                "ap_lo": (40.0, 180.0),
                "height": (120.0, 220.0),
                "weight": (30.0, 200.0),
                "age": (18.0, 100.0),
            },
            ("ap_hi>ap_lo",),
        )


def row_passes(row, rules: OutlierRules, index: dict[str, int]) -> bool:
    for name, (lo, hi) in rules.bounds.items():
        v = row[index[name]]
        if v is not MISSING and not lo <= v <= hi:
            return False
    for rel in rules.relational:
        left, op, right = _RELATION.match(rel).groups()
        a, b = row[index[left]], row[index[right]]
        if a is not MISSING and b is not MISSING and not _OPS[op](a, b):
            return False
    return True


def filter_outliers(table: RawTable, rules: OutlierRules) -> tuple[RawTable, int]:
    names = table.descriptor.names
    unknown = sorted(rules.columns - set(names))
    if unknown:
        raise KeyError(f"outlier rules reference unknown column(s) {unknown}")
    index = {c: names.index(c) for c in rules.columns}
    kept = [row for row in table.rows if row_passes(row, rules, index)]
    return table.replace_rows(kept), table.row_count - len(kept)


def age_days_to_years(days) -> int:
    if days < 0:
        raise ValueError(f"age in days must be non-negative, got {days}")
    return int(math.floor(days / 365.25))


class BPCategory(enum.IntEnum):
    NORMAL = 0
    ELEVATED = 1
    STAGE1 = 2
    STAGE2 = 3
    CRISIS = 4


def categorize_bp(systolic: float, diastolic: float) -> BPCategory:
    """AHA 2017 stage from systolic / diastolic mmHg; the most severe match wins."""
    if systolic <= 0 or diastolic <= 0:
        raise ValueError(f"blood pressure must be positive, got {systolic}/{diastolic}")
    if systolic > 180 or diastolic > 120:
        return BPCategory.CRISIS
    if systolic >= 140 or diastolic >= 90:
        return BPCategory.STAGE2
    if systolic >= 130 or diastolic >= 80:
        return BPCategory.STAGE1
    if systolic >= 120:
        return BPCategory.ELEVATED
    return BPCategory.NORMAL


def transform_dataset1(table: RawTable) -> RawTable:
    """Convert ``age`` from days to whole years and append an ordinal
    ``bp_category`` column computed from the raw ``ap_hi`` / ``ap_lo``."""
    desc = table.descriptor
    ia, ihi, ilo = desc.index("age"), desc.index("ap_hi"), desc.index("ap_lo")
    new_desc = desc.with_column("bp_category", ColumnKind.ORDINAL, after="ap_lo")
    insert_at = ilo + 1
    rows = []
    for row in table.rows:
        row = list(row)
        if row[ia] is not MISSING:
            row[ia] = float(age_days_to_years(row[ia]))
        hi, lo = row[ihi], row[ilo]
        if hi is MISSING or lo is MISSING or hi <= 0 or lo <= 0:
            bp = MISSING
        else:
            bp = float(categorize_bp(hi, lo))
        row.insert(insert_at, bp)
        rows.append(tuple(row))
    return RawTable(new_desc, tuple(rows))


@dataclass(frozen=True)
class Imputer:
    """Per-column fill values: median for numeric kinds, mode for nominal."""

    fill: dict

    @classmethod
    def fit(cls, table: RawTable, rows=None) -> "Imputer":
        sub = table if rows is None else table.take(rows)
        fill = {}
        for name, kind in sub.descriptor.feature_columns:
            values = [v for v in sub.column(name) if v is not MISSING]
            if kind is ColumnKind.NOMINAL:
                if values:
                    counts = Counter(values)
                    top = max(counts.values())
                    fill[name] = min(v for v, c in counts.items() if c == top)
                else:
                    fill[name] = "__missing__"
            else:
                fill[name] = float(np.median(values)) if values else 0.0
        return cls(fill)

    def apply(self, table: RawTable) -> RawTable:
        cols = [(table.descriptor.index(c), v) for c, v in self.fill.items()]
        if not any(v is MISSING for row in table.rows for v in row):
            return table
        rows = []
        for row in table.rows:
            if any(row[j] is MISSING for j, _ in cols):
                row = list(row)
                for j, v in cols:
                    if row[j] is MISSING:
                        row[j] = v
                row = tuple(row)
            rows.append(row)
        return table.replace_rows(rows)


@dataclass(frozen=True)
class CleaningReport:
    loaded: int
    missing_target: int
    duplicates: int
    outliers: int

    @property
    def retained(self) -> int:
        return self.loaded - self.missing_target - self.duplicates - self.outliers

    def to_json(self) -> dict:
        return {
            "loaded": self.loaded,
            "missing_target": self.missing_target,
            "duplicates": self.duplicates,
            "outliers": self.outliers,
            "retained": self.retained,
        }


def clean_table(table: RawTable, rules: OutlierRules | None = None) -> tuple[RawTable, CleaningReport]:
    """Drop unlabeled rows and duplicates, apply the cardio-table transforms
    when the schema is ``dataset1``, then filter outliers.

    The transforms run before the outlier filter so that age bounds are
    read in years.
    """
    loaded = table.row_count
    t = drop_missing_target(table)
    missing = loaded - t.row_count
    n = t.row_count
    t = deduplicate(t)
    dups = n - t.row_count
    if table.descriptor.name == "dataset1":
        t = transform_dataset1(t)
    removed = 0
    if rules is not None:
        t, removed = filter_outliers(t, rules)
    return t, CleaningReport(loaded, missing, dups, removed)
