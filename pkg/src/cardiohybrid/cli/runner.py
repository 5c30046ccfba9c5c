"""End-to-end experiment: clean, split, cross-validate, vote, score, test."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from ..ensemble import WeightedVotingEnsemble
from ..errors import CSVFormatError, DataError
from ..evaluation import (
    CVSummary,
    PreprocessConfig,
    grid_search,
    make_folds,
    paired_t_test,
    prepare_fold,
    run_cv,
    score,
)
from ..ingest import RawTable, builtin_descriptor, load_csv, synth_generate
from ..learners import make_classifier
from ..preprocess import OutlierRules, clean_table, stratified_subsample, split_holdout
from ..seeding import derive_seed
from .config import ExperimentConfig

HYBRID = "hybrid"
# fields that only steer where and how results are written; left out of the bundle
OUTPUT_FIELDS = ("output_dir", "emit_votes", "format")
DATA_ENV = {"dataset1": "CARDIOHYBRID_DATASET1", "dataset2": "CARDIOHYBRID_DATASET2"}


def load_dataset(cfg: ExperimentConfig) -> RawTable:
    if cfg.dataset == "synthetic":
        s = cfg.synthetic
        return synth_generate(builtin_descriptor(s["schema"]), s["n"], s["class_balance"], cfg.cv["seed"])
    path = cfg.data_path or os.environ.get(DATA_ENV.get(cfg.dataset, ""), "")
    if not path:
        raise DataError(f"no data file for {cfg.dataset}; set data_path or {DATA_ENV[cfg.dataset]}")
    descriptor = cfg.descriptor or builtin_descriptor(cfg.dataset)
    try:
        return load_csv(path, descriptor)
    except CSVFormatError:
        raise
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def resolve_rules(cfg: ExperimentConfig, table: RawTable):
    if cfg.outlier_rules == "auto":
        return OutlierRules.dataset1_default() if table.descriptor.name == "dataset1" else None
    return cfg.outlier_rules


def prepare_table(cfg: ExperimentConfig):
    """Load, clean and (optionally) subsample; returns the table and a data summary."""
    raw = load_dataset(cfg)
    table, report = clean_table(raw, resolve_rules(cfg, raw))
    if table.row_count == 0:
        raise DataError("no rows left after cleaning")
    info = {"cleaning": report.to_json()}
    if cfg.subsample is not None and cfg.subsample < table.row_count:
        table = table.take(stratified_subsample(table.labels(), cfg.subsample, cfg.cv["seed"]))
    y = table.labels()
    if np.unique(y).size < 2:
        raise DataError("the target column holds a single class")
    info["rows"] = table.row_count
    info["positives"] = int(y.sum())
    return table, info


@dataclass
class ReportBundle:
    config: dict
    data: dict
    cv: dict  # kind -> CVSummary, in config order
    tuned: dict  # kind -> hyperparameters used after grid search
    grids: dict  # kind -> [{"params", "accuracy"}]
    ensemble: CVSummary | None
    holdout: dict  # kind (or "hybrid") -> MetricsReport
    ttests: dict
    cost: list
    names: dict  # kind -> display name
    votes: list = field(default_factory=list)

    def summaries(self) -> dict:
        out = dict(self.cv)
        if self.ensemble is not None:
            out[HYBRID] = self.ensemble
        return out

    def timings(self) -> dict:
        return {k: s.fold_seconds for k, s in self.summaries().items()}

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "data": self.data,
            "names": self.names,
            "cv": {k: s.to_json() for k, s in self.cv.items()},
            "tuned": self.tuned,
            "grids": self.grids,
            "ensemble": self.ensemble.to_json() if self.ensemble else None,
            "holdout": {k: r.to_json() for k, r in self.holdout.items()},
            "ttests": self.ttests,
            "cost": self.cost,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "ReportBundle":
        from ..evaluation import MetricsReport

        return cls(
            obj["config"], obj["data"], {k: CVSummary.from_json(v) for k, v in obj["cv"].items()},
            obj["tuned"], obj["grids"], CVSummary.from_json(obj["ensemble"]) if obj["ensemble"] else None,
            {k: MetricsReport.from_json(v) for k, v in obj["holdout"].items()}, obj["ttests"], obj["cost"],
            obj["names"],
        )


def compare_to_baseline(summaries: dict, candidates: list[str]) -> dict:
    """Paired t-tests on per-fold accuracy against the best single model."""
    base = max(candidates, key=lambda k: (summaries[k].mean["accuracy"], -candidates.index(k)))
    results = {}
    for kind, s in summaries.items():
        if kind == base:
            continue
        try:
            results[kind] = paired_t_test(s.values("accuracy"), summaries[base].values("accuracy")).to_json()
        except ValueError as exc:
            results[kind] = {"error": str(exc)}
    return {"baseline": base, "metric": "accuracy", "results": results}


def _param_count(clf):
    n = clf.param_count()
    return None if n is None else int(n)


def run_experiment(cfg: ExperimentConfig, log=None) -> ReportBundle:
    say = log or (lambda msg: None)
    table, info = prepare_table(cfg)
    y = table.labels()
    train_idx, test_idx = split_holdout(table.row_count, cfg.holdout["fraction"], cfg.holdout["seed"], y)
    info["train_rows"], info["test_rows"] = int(train_idx.size), int(test_idx.size)
    train_table = table.take(train_idx)
    pcfg = PreprocessConfig(smote=cfg.smote["enabled"], smote_k=cfg.smote["k"])
    k, seed = cfg.cv["k"], cfg.cv["seed"]
    folds = make_folds(train_table, k, seed, pcfg)

    cv, tuned, grids, names = {}, {}, {}, {}
    for entry in cfg.models:
        if entry.grid:
            say(f"grid search: {entry.kind} ({entry.grid})")
            best, cells = grid_search(lambda p, e=entry: make_classifier(e.kind, {**e.hyperparams, **p}),
                                      entry.grid, train_table, k, seed, pcfg, folds=folds)
            tuned[entry.kind] = {**entry.hyperparams, **best}
            grids[entry.kind] = [{"params": p, "accuracy": s.mean["accuracy"]} for p, s in cells]
            summary = next(s for p, s in cells if p == best)
            summary.hyperparams = tuned[entry.kind]
        else:
            say(f"cross-validating: {entry.kind}")
            tuned[entry.kind] = dict(entry.hyperparams)
            summary = run_cv(lambda e=entry: make_classifier(e.kind, e.hyperparams), train_table, k, seed, pcfg,
                             folds=folds, hyperparams=tuned[entry.kind])
        cv[entry.kind] = summary
        names[entry.kind] = summary.model

    ensemble = None
    if cfg.ensemble:
        say("cross-validating: hybrid ensemble")
        members = [(m, tuned[m]) for m in cfg.ensemble["members"]]
        make_hybrid = lambda: WeightedVotingEnsemble(members, cfg.ensemble["validation_fraction"],  # noqa: E731
                                                     cfg.ensemble["refit"])
        ensemble = run_cv(make_hybrid, train_table, k, seed, pcfg, folds=folds,
                          hyperparams={"members": [m for m, _ in members]})
        names[HYBRID] = ensemble.model

    say("holdout scoring")
    hfd = prepare_fold(table, train_idx, test_idx, pcfg, derive_seed(cfg.holdout["seed"], 1), fold=-1)
    holdout, cost, votes = {}, [], []
    for i, entry in enumerate(cfg.models):
        clf = make_classifier(entry.kind, tuned[entry.kind]).fit(hfd.X_train, hfd.y_train, seed=derive_seed(seed, 2, i))
        holdout[entry.kind] = score(hfd.y_val, clf.predict(hfd.X_val))
        cost.append({"model": entry.kind, "name": names[entry.kind], "params": _param_count(clf)})
    if cfg.ensemble:
        hyb = make_hybrid().fit(hfd.X_train, hfd.y_train, seed=derive_seed(seed, 3))
        holdout[HYBRID] = score(hfd.y_val, hyb.predict(hfd.X_val))
        cost.append({"model": HYBRID, "name": hyb.name, "params": _param_count(hyb)})
        if cfg.emit_votes:
            for row, trace in zip(test_idx, hyb.traces(hfd.X_val)):
                votes.append({"row": int(row), "members": cfg.ensemble["members"], **trace.to_json()})

    summaries = dict(cv)
    if ensemble is not None:
        summaries[HYBRID] = ensemble
    ttests = compare_to_baseline(summaries, [m.kind for m in cfg.models])
    recorded = {k: v for k, v in cfg.to_json().items() if k not in OUTPUT_FIELDS}
    return ReportBundle(recorded, info, cv, tuned, grids, ensemble, holdout, ttests, cost, names, votes)


def cost_profile(entries, table: RawTable, k: int = 3, seed: int = 0, pcfg: PreprocessConfig | None = None,
                 ensemble: dict | None = None) -> list[dict]:
    """Parameter counts and mean per-fold training seconds on ``table``."""
    pcfg = pcfg or PreprocessConfig()
    folds = make_folds(table, k, seed, pcfg)
    rows = []
    specs = [(e.kind, lambda e=e: make_classifier(e.kind, e.hyperparams)) for e in entries]
    if ensemble:
        hp = {e.kind: e.hyperparams for e in entries}
        members = [(m, hp[m]) for m in ensemble["members"]]
        specs.append((HYBRID, lambda: WeightedVotingEnsemble(members, ensemble["validation_fraction"],
                                                             ensemble["refit"])))
    for kind, factory in specs:
        summary, models = run_cv(factory, table, k, seed, pcfg, folds=folds, keep_models=True)
        rows.append({"model": kind, "name": summary.model, "params": _param_count(models[0]),
                     "train_seconds": summary.mean_seconds})
    return rows
