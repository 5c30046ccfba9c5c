"""Markdown / CSV tables from a report bundle.

Cells are CV means and sample standard deviations in percentage points,
``"82.30 (0.23)"``; no other arithmetic happens here.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .runner import HYBRID, ReportBundle

COLUMNS = (("Accuracy", "accuracy"), ("Recall", "recall"), ("F1", "f1"), ("Precision", "precision"),
           ("Specificity", "specificity"))
ABLATION_ROWS = ("cnn", "lstm", "cnn_lstm", HYBRID)


def fmt_mean_std(mean: float, std: float) -> str:
    return f"{mean * 100:.2f} ({std * 100:.2f})"


def fmt_pct(value: float) -> str:
    return f"{value * 100:.2f}"


def _metric_rows(bundle: ReportBundle, kinds) -> list[list[str]]:
    summaries = bundle.summaries()
    rows = []
    for kind in kinds:
        s = summaries[kind]
        rows.append([bundle.names[kind]] + [fmt_mean_std(s.mean[m], s.std[m]) for _, m in COLUMNS])
    return rows


def comparison_table(bundle: ReportBundle):
    header = ["Model"] + [f"{c} (std)" for c, _ in COLUMNS]
    return header, _metric_rows(bundle, list(bundle.summaries()))


def ablation_table(bundle: ReportBundle):
    header = ["Configuration"] + [f"{c} (std)" for c, _ in COLUMNS]
    present = [k for k in ABLATION_ROWS if k in bundle.summaries()]
    return header, _metric_rows(bundle, present)


def holdout_table(bundle: ReportBundle):
    header = ["Model"] + [c for c, _ in COLUMNS]
    rows = []
    for kind, r in bundle.holdout.items():
        rows.append([bundle.names[kind]] + [fmt_pct(getattr(r, m)) for _, m in COLUMNS])
    return header, rows


def cost_table(bundle: ReportBundle, timings: dict | None = None):
    """Parameter counts ("--" for instance-based KNN) and mean fold fit time."""
    timings = bundle.timings() if timings is None else timings
    rows = []
    for row in bundle.cost:
        secs = timings.get(row["model"])
        rows.append([
            row["name"],
            "--" if row["params"] is None else str(row["params"]),
            f"{sum(secs) / len(secs):.2f}" if secs else "--",
        ])
    return ["Model", "Params", "Train time (s)"], rows


def cost_rows_table(rows: list[dict]):
    body = [[r["name"], "--" if r["params"] is None else str(r["params"]), f"{r['train_seconds']:.2f}"]
            for r in rows]
    return ["Model", "Params", "Train time (s)"], body


def to_markdown(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_table(out_dir, stem: str, header, rows, fmt: str = "both") -> list[Path]:
    out_dir = Path(out_dir)
    paths = []
    if fmt in ("markdown", "both"):
        p = out_dir / f"{stem}.md"
        p.write_text(to_markdown(header, rows), encoding="utf-8")
        paths.append(p)
    if fmt in ("csv", "both"):
        p = out_dir / f"{stem}.csv"
        p.write_text(to_csv(header, rows), encoding="utf-8")
        paths.append(p)
    return paths


def emit_tables(bundle: ReportBundle, out_dir, fmt: str = "both", timings: dict | None = None) -> list[Path]:
    """Write comparison, ablation, holdout and cost tables; returns the paths."""
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    paths = []
    paths += write_table(out_dir, "comparison", *comparison_table(bundle), fmt)
    paths += write_table(out_dir, "ablation", *ablation_table(bundle), fmt)
    paths += write_table(out_dir, "holdout", *holdout_table(bundle), fmt)
    paths += write_table(out_dir, "cost", *cost_table(bundle, timings), fmt)
    return paths
