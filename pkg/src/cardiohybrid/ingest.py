"""Dataset schemas, CSV loading and synthetic fixtures.

Two built-in schemas are provided: the 70 000-row cardiovascular-disease
table (semicolon-delimited, ages in days) and the 918-row merged heart
disease table. Cells are typed per column kind; missing tokens become
``MISSING`` and are dealt with later in :mod:`cardiohybrid.preprocess`.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CSVFormatError

MISSING = None
MISSING_TOKENS = frozenset({"", "NA", "?"})


class ColumnKind(str, enum.Enum):
    CONTINUOUS = "numeric-continuous"
    ORDINAL = "numeric-ordinal"
    NOMINAL = "categorical-nominal"
    BINARY = "binary"
    TARGET = "target"
    # parsed and carried along, never used as a feature
    IDENTIFIER = "identifier"

    @property
    def is_numeric(self) -> bool:
        return self in (ColumnKind.CONTINUOUS, ColumnKind.ORDINAL, ColumnKind.BINARY)


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    columns: tuple[tuple[str, ColumnKind], ...]
    expected_attribute_count: int

    def __post_init__(self):
        names = [c for c, _ in self.columns]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate column names in descriptor {self.name!r}")
        n_target = sum(kind is ColumnKind.TARGET for _, kind in self.columns)
        if n_target != 1:
            raise ValueError(f"descriptor {self.name!r} needs exactly one target column, has {n_target}")

    @property
    def names(self) -> list[str]:
        return [c for c, _ in self.columns]

    @property
    def target(self) -> str:
        return next(c for c, k in self.columns if k is ColumnKind.TARGET)

    @property
    def attribute_count(self) -> int:
        """Columns that carry information: features plus target, identifiers excluded."""
        return sum(k is not ColumnKind.IDENTIFIER for _, k in self.columns)

    @property
    def feature_columns(self) -> list[tuple[str, ColumnKind]]:
        return [(c, k) for c, k in self.columns if k not in (ColumnKind.TARGET, ColumnKind.IDENTIFIER)]

    def kind(self, column: str) -> ColumnKind:
        for c, k in self.columns:
            if c == column:
                return k
        raise KeyError(column)

    def index(self, column: str) -> int:
        try:
            return self.names.index(column)
        except ValueError:
            raise KeyError(column) from None

    def with_column(self, name: str, kind: ColumnKind, *, after: str | None = None) -> "DatasetDescriptor":
        cols = list(self.columns)
        pos = len(cols) if after is None else self.index(after) + 1
        cols.insert(pos, (name, kind))
        return DatasetDescriptor(self.name, tuple(cols), self.expected_attribute_count + 1)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "columns": [[c, k.value] for c, k in self.columns],
            "expected_attribute_count": self.expected_attribute_count,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DatasetDescriptor":
        cols = tuple((str(c), ColumnKind(k)) for c, k in obj["columns"])
        count = obj.get("expected_attribute_count")
        if count is None:
            count = sum(k is not ColumnKind.IDENTIFIER for _, k in cols)
        return cls(str(obj.get("name", "custom")), cols, int(count))


@dataclass(frozen=True)
class RawTable:
    descriptor: DatasetDescriptor
    rows: tuple[tuple, ...]

    def __post_init__(self):
        width = len(self.descriptor.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i + 1} has {len(row)} cells, descriptor has {width} columns")

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list:
        j = self.descriptor.index(name)
        return [row[j] for row in self.rows]

    def labels(self) -> np.ndarray:
        return np.asarray(self.column(self.descriptor.target), dtype=np.int64)

    def take(self, indices: Iterable[int]) -> "RawTable":
        rows = self.rows
        return RawTable(self.descriptor, tuple(rows[i] for i in indices))

    def replace_rows(self, rows: Iterable[tuple]) -> "RawTable":
        return RawTable(self.descriptor, tuple(rows))


_DATASET1 = DatasetDescriptor(
    "dataset1",
    (
        ("id", ColumnKind.IDENTIFIER),
        ("age", ColumnKind.CONTINUOUS),
        ("gender", ColumnKind.NOMINAL),
        ("height", ColumnKind.CONTINUOUS),
        ("weight", ColumnKind.CONTINUOUS),
        ("ap_hi", ColumnKind.CONTINUOUS),
        ("ap_lo", ColumnKind.CONTINUOUS),
        ("cholesterol", ColumnKind.ORDINAL),
        ("gluc", ColumnKind.ORDINAL),
        ("smoke", ColumnKind.BINARY),
        ("alco", ColumnKind.BINARY),
        ("active", ColumnKind.BINARY),
        ("cardio", ColumnKind.TARGET),
    ),
    12,
)

_DATASET2 = DatasetDescriptor(
    "dataset2",
    (
        ("Age", ColumnKind.CONTINUOUS),
        ("Sex", ColumnKind.NOMINAL),
        ("ChestPainType", ColumnKind.NOMINAL),
        ("RestingBP", ColumnKind.CONTINUOUS),
        ("Cholesterol", ColumnKind.CONTINUOUS),
        ("FastingBS", ColumnKind.BINARY),
        ("RestingECG", ColumnKind.NOMINAL),
        ("MaxHR", ColumnKind.CONTINUOUS),
        ("ExerciseAngina", ColumnKind.NOMINAL),
        ("Oldpeak", ColumnKind.CONTINUOUS),
        ("ST_Slope", ColumnKind.NOMINAL),
        ("HeartDisease", ColumnKind.TARGET),
    ),
    12,
)

BUILTIN_DESCRIPTORS = {"dataset1": _DATASET1, "dataset2": _DATASET2}


def builtin_descriptor(which: str) -> DatasetDescriptor:
    try:
        return BUILTIN_DESCRIPTORS[which]
    except KeyError:
        raise ValueError(f"unknown dataset {which!r}; expected one of {sorted(BUILTIN_DESCRIPTORS)}") from None


def _sniff_delimiter(header_line: str) -> str:
    if header_line.count(";") > header_line.count(","):
        return ";"
    return ","


def parse_cell(text: str, kind: ColumnKind, row: int, column: str):
    """Convert one CSV cell to its typed value (``MISSING`` for missing tokens)."""
    text = text.strip()
    if text in MISSING_TOKENS:
        return MISSING
    if kind is ColumnKind.NOMINAL or kind is ColumnKind.IDENTIFIER:
        return text
    try:
        value = float(text)
    except ValueError:
        raise CSVFormatError(f"cannot parse {text!r} as a number", row=row, column=column) from None
    if not math.isfinite(value):
        raise CSVFormatError(f"non-finite value {text!r}", row=row, column=column)
    if kind is ColumnKind.TARGET or kind is ColumnKind.BINARY:
        if value not in (0.0, 1.0):
            raise CSVFormatError(f"expected 0 or 1, got {text!r}", row=row, column=column)
        return int(value) if kind is ColumnKind.TARGET else value
    return value


def load_csv(path, descriptor: DatasetDescriptor) -> RawTable:
    """Read a headered CSV file (comma or semicolon delimited) into a typed table.

    Row numbers in errors count data rows from 1, excluding the header.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8-sig")
    if not text.strip():
        raise CSVFormatError(f"empty file: {path}")
    return parse_csv_text(text, descriptor)


def parse_csv_text(text: str, descriptor: DatasetDescriptor) -> RawTable:
    first_line = text.splitlines()[0]
    reader = csv.reader(io.StringIO(text), delimiter=_sniff_delimiter(first_line))
    header = [h.strip().strip('"') for h in next(reader)]

    expected = descriptor.names
    missing = [c for c in expected if c not in header]
    extra = [c for c in header if c not in expected]
    if missing:
        raise CSVFormatError(f"missing column(s) {missing} for descriptor {descriptor.name!r}")
    if extra:
        raise CSVFormatError(f"unexpected column(s) {extra} for descriptor {descriptor.name!r}")
    if len(header) != len(set(header)):
        raise CSVFormatError("duplicate column names in header")

    positions = [header.index(c) for c in expected]
    kinds = [k for _, k in descriptor.columns]
    rows = []
    for r, cells in enumerate(reader, start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise CSVFormatError(f"expected {len(header)} cells, found {len(cells)}", row=r)
        rows.append(
            tuple(parse_cell(cells[p], k, r, name) for p, k, name in zip(positions, kinds, expected))
        )
    return RawTable(descriptor, tuple(rows))


def format_cell(value) -> str:
    if value is MISSING:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(table: RawTable, path) -> None:
    """Write a table as comma-delimited CSV with the header first."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(table_to_csv_text(table))


def table_to_csv_text(table: RawTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.descriptor.names)
    for row in table.rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


# --- synthetic fixtures ------------------------------------------------------


def _clip_round(values: np.ndarray, lo: float, hi: float, decimals: int = 0) -> list[float]:
    return [float(v) for v in np.round(np.clip(values, lo, hi), decimals)]


def _synth_dataset1(rng: np.random.Generator, y: np.ndarray) -> list[list]:
    n = len(y)
    years = np.clip(rng.normal(50 + 4 * y, 6.0), 30, 65)
    age_days = np.floor(years * 365.25 + rng.uniform(0, 300, n))
    gender = rng.choice(["1", "2"], size=n, p=[0.65, 0.35])
    height = _clip_round(rng.normal(165, 8, n), 140, 200)
    weight = _clip_round(rng.normal(72 + 6 * y, 12), 40, 150, 1)
    ap_hi = np.round(np.clip(rng.normal(120 + 15 * y, 12), 90, 200))
    ap_lo = np.round(np.clip(rng.normal(80 + 8 * y, 8), 60, 120))
    ap_lo = np.minimum(ap_lo, ap_hi - 10)
    chol = 1 + (rng.random(n) < 0.15 + 0.2 * y) + (rng.random(n) < 0.05 + 0.1 * y)
    gluc = 1 + (rng.random(n) < 0.1 + 0.08 * y) + (rng.random(n) < 0.04 + 0.05 * y)
    smoke = rng.random(n) < 0.09
    alco = rng.random(n) < 0.05
    active = rng.random(n) < 0.82 - 0.05 * y
    return [
        [str(i), float(age_days[i]), str(gender[i]), height[i], weight[i], float(ap_hi[i]),
         float(ap_lo[i]), float(chol[i]), float(gluc[i]), float(smoke[i]), float(alco[i]),
         float(active[i]), int(y[i])]
        for i in range(n)
    ]


def _synth_dataset2(rng: np.random.Generator, y: np.ndarray) -> list[list]:
    n = len(y)
    age = _clip_round(rng.normal(50 + 5 * y, 9), 28, 77)
    sex = np.where(rng.random(n) < 0.65 + 0.25 * y, "M", "F")
    pain_pos = rng.choice(["ASY", "ATA", "NAP", "TA"], size=n, p=[0.77, 0.05, 0.14, 0.04])
    pain_neg = rng.choice(["ASY", "ATA", "NAP", "TA"], size=n, p=[0.25, 0.37, 0.32, 0.06])
    pain = np.where(y == 1, pain_pos, pain_neg)
    bp = _clip_round(rng.normal(130 + 4 * y, 17), 80, 200)
    chol = _clip_round(rng.normal(240 - 20 * y, 50), 100, 600)
    fbs = rng.random(n) < 0.11 + 0.22 * y
    ecg = rng.choice(["Normal", "LVH", "ST"], size=n, p=[0.6, 0.2, 0.2])
    maxhr = _clip_round(rng.normal(150 - 22 * y, 22), 60, 202)
    angina = np.where(rng.random(n) < 0.13 + 0.49 * y, "Y", "N")
    oldpeak = _clip_round(rng.normal(0.4 + 0.9 * y, 0.9), -2.6, 6.2, 1)
    slope_pos = rng.choice(["Flat", "Up", "Down"], size=n, p=[0.75, 0.17, 0.08])
    slope_neg = rng.choice(["Flat", "Up", "Down"], size=n, p=[0.2, 0.76, 0.04])
    slope = np.where(y == 1, slope_pos, slope_neg)
    return [
        [age[i], str(sex[i]), str(pain[i]), bp[i], chol[i], float(fbs[i]), str(ecg[i]), maxhr[i],
         str(angina[i]), oldpeak[i], str(slope[i]), int(y[i])]
        for i in range(n)
    ]


def _synth_generic(rng: np.random.Generator, y: np.ndarray, descriptor: DatasetDescriptor) -> list[list]:
    n = len(y)
    columns = []
    for name, kind in descriptor.columns:
        if kind is ColumnKind.TARGET:
            columns.append([int(v) for v in y])
        elif kind is ColumnKind.IDENTIFIER:
            columns.append([str(i) for i in range(n)])
        elif kind is ColumnKind.CONTINUOUS:
            columns.append(_clip_round(rng.normal(0.8 * y, 1.0), -10, 10, 4))
        elif kind is ColumnKind.ORDINAL:
            columns.append([float(v) for v in 1 + (rng.random(n) < 0.3 + 0.3 * y) + (rng.random(n) < 0.2)])
        elif kind is ColumnKind.BINARY:
            columns.append([float(v) for v in rng.random(n) < 0.3 + 0.3 * y])
        else:
            columns.append([str(v) for v in rng.choice(["A", "B", "C"], size=n)])
    return [list(r) for r in zip(*columns)] if n else []


def synth_generate(descriptor: DatasetDescriptor, n: int, class_balance: float, seed: int) -> RawTable:
    """Deterministic synthetic table with ``round(n * class_balance)`` positive rows.

    Feature distributions shift with the label so that the task is learnable;
    values stay inside the default physiologic outlier bounds.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= class_balance <= 1.0:
        raise ValueError("class_balance must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    n_pos = int(math.floor(n * class_balance + 0.5))
    y = np.zeros(n, dtype=np.int64)
    y[:n_pos] = 1
    rng.shuffle(y)
    if descriptor.name == "dataset1" and descriptor.names == _DATASET1.names:
        rows = _synth_dataset1(rng, y)
    elif descriptor.name == "dataset2" and descriptor.names == _DATASET2.names:
        rows = _synth_dataset2(rng, y)
    else:
        rows = _synth_generic(rng, y, descriptor)
    return RawTable(descriptor, tuple(tuple(r) for r in rows))


def tables_equal(a: RawTable, b: RawTable) -> bool:
    return a.descriptor == b.descriptor and a.rows == b.rows


def row_count_of_file(path) -> int:
    """Data lines in a CSV file (blank lines ignored), header excluded."""
    with open(path, encoding="utf-8-sig") as fh:
        lines = [ln for ln in fh if ln.strip()]
    return max(0, len(lines) - 1)


__all__: Sequence[str] = [
    "MISSING",
    "ColumnKind",
    "DatasetDescriptor",
    "RawTable",
    "builtin_descriptor",
    "load_csv",
    "parse_csv_text",
    "write_csv",
    "table_to_csv_text",
    "synth_generate",
]
