"""Experiment configuration: one JSON document, validated field by field."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field

from ..errors import ConfigError
from ..ingest import DatasetDescriptor, builtin_descriptor
from ..learners.factory import DEFAULT_GRIDS, KINDS, make_classifier
from ..preprocess import OutlierRules

DATASETS = ("dataset1", "dataset2", "synthetic", "custom")
FORMATS = ("markdown", "csv", "both")
ABLATION_KINDS = ("cnn", "lstm", "cnn_lstm")


def _fail(path: str, message: str):
    raise ConfigError(f"{path}: {message}")


def _expect(obj, path, types, what):
    if not isinstance(obj, types):
        _fail(path, f"expected {what}, got {type(obj).__name__}")
    return obj


def _int(obj, path, minimum=None):
    if isinstance(obj, bool) or not isinstance(obj, int):
        _fail(path, f"expected an integer, got {obj!r}")
    if minimum is not None and obj < minimum:
        _fail(path, f"must be >= {minimum}, got {obj}")
    return obj


def _keys(obj: dict, path: str, allowed):
    for key in obj:
        if key not in allowed:
            _fail(f"{path}.{key}" if path else key, f"unknown field; expected one of {', '.join(allowed)}")


@dataclass(frozen=True)
class ModelEntry:
    kind: str
    hyperparams: dict = field(default_factory=dict)
    grid: dict | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "hyperparams": self.hyperparams, "grid": self.grid}


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = "synthetic"
    data_path: str | None = None
    descriptor: DatasetDescriptor | None = None
    synthetic: dict = field(default_factory=lambda: {"n": 400, "class_balance": 0.5, "schema": "dataset2"})
    subsample: int | None = None
    models: tuple = ()
    ensemble: dict | None = None
    cv: dict = field(default_factory=lambda: {"k": 10, "seed": 0})
    holdout: dict = field(default_factory=lambda: {"fraction": 0.2, "seed": 0})
    outlier_rules: OutlierRules | str | None = "auto"  # "auto": defaults for the cardio schema only
    smote: dict = field(default_factory=lambda: {"enabled": True, "k": 5})
    output_dir: str = "results"
    emit_votes: bool = False
    format: str = "both"

    def model(self, kind: str) -> ModelEntry:
        for m in self.models:
            if m.kind == kind:
                return m
        raise KeyError(kind)

    def to_json(self) -> dict:
        return {
            "dataset": self.dataset,
            "data_path": self.data_path,
            "descriptor": self.descriptor.to_json() if self.descriptor else None,
            "synthetic": self.synthetic,
            "subsample": self.subsample,
            "models": [m.to_json() for m in self.models],
            "ensemble": self.ensemble,
            "cv": self.cv,
            "holdout": self.holdout,
            "outlier_rules": self.outlier_rules.to_json() if isinstance(self.outlier_rules, OutlierRules)
            else self.outlier_rules,
            "smote": self.smote,
            "output_dir": self.output_dir,
            "emit_votes": self.emit_votes,
            "format": self.format,
        }

    def replace(self, **changes) -> "ExperimentConfig":
        obj = self.to_json()
        obj.update(changes)
        return parse_config(obj)


def _parse_model(obj, path) -> ModelEntry:
    if isinstance(obj, str):
        obj = {"kind": obj}
    _expect(obj, path, dict, "an object or a kind name")
    _keys(obj, path, ("kind", "hyperparams", "grid"))
    kind = obj.get("kind")
    if kind not in KINDS:
        _fail(f"{path}.kind", f"unknown classifier kind {kind!r}; valid kinds: {', '.join(KINDS)}")
    hp = _expect(obj.get("hyperparams") or {}, f"{path}.hyperparams", dict, "an object")
    try:
        make_classifier(kind, hp)
    except ConfigError as exc:
        _fail(f"{path}.hyperparams", str(exc))
    grid = obj.get("grid")
    if grid == "default":
        if kind not in DEFAULT_GRIDS:
            _fail(f"{path}.grid", f"no default grid for {kind!r}")
        grid = copy.deepcopy(DEFAULT_GRIDS[kind])
    if grid is not None:
        _expect(grid, f"{path}.grid", dict, "an object, \"default\" or null")
        if not grid:
            _fail(f"{path}.grid", "empty grid")
        for key, values in grid.items():
            if not isinstance(values, list) or not values:
                _fail(f"{path}.grid.{key}", "expected a non-empty list of values")
            for v in values:
                try:
                    make_classifier(kind, {**hp, key: v})
                except ConfigError as exc:
                    _fail(f"{path}.grid.{key}", str(exc))
    return ModelEntry(kind, dict(hp), grid)


def parse_config(obj: dict) -> ExperimentConfig:
    """Validate a decoded JSON config; every error names the offending field."""
    _expect(obj, "config", dict, "a JSON object")
    allowed = ExperimentConfig.__dataclass_fields__.keys()
    _keys(obj, "", tuple(allowed))
    base = ExperimentConfig()
    out = {}

    dataset = obj.get("dataset", base.dataset)
    if dataset not in DATASETS:
        _fail("dataset", f"expected one of {', '.join(DATASETS)}, got {dataset!r}")
    out["dataset"] = dataset
    data_path = obj.get("data_path")
    if data_path is not None:
        _expect(data_path, "data_path", str, "a file path")
    if dataset == "custom" and data_path is None:
        _fail("data_path", "required when dataset is 'custom'")
    out["data_path"] = data_path

    desc = obj.get("descriptor")
    if isinstance(desc, str):
        try:
            desc = builtin_descriptor(desc)
        except (KeyError, ValueError):
            _fail("descriptor", f"unknown built-in descriptor {desc!r}")
    elif isinstance(desc, dict):
        try:
            desc = DatasetDescriptor.from_json(desc)
        except (KeyError, ValueError, TypeError) as exc:
            _fail("descriptor", f"invalid descriptor: {exc}")
    elif desc is not None:
        _fail("descriptor", "expected a built-in name or a descriptor object")
    if dataset == "custom" and desc is None:
        _fail("descriptor", "required when dataset is 'custom'")
    out["descriptor"] = desc

    syn = dict(base.synthetic)
    syn.update(_expect(obj.get("synthetic") or {}, "synthetic", dict, "an object"))
    _keys(syn, "synthetic", ("n", "class_balance", "schema"))
    _int(syn["n"], "synthetic.n", 2)
    cb = syn["class_balance"]
    if isinstance(cb, bool) or not isinstance(cb, (int, float)) or not 0 < cb < 1:
        _fail("synthetic.class_balance", f"must be a number in (0, 1), got {cb!r}")
    if syn["schema"] not in ("dataset1", "dataset2"):
        _fail("synthetic.schema", f"expected 'dataset1' or 'dataset2', got {syn['schema']!r}")
    out["synthetic"] = syn

    sub = obj.get("subsample")
    out["subsample"] = None if sub is None else _int(sub, "subsample", 2)

    models_raw = obj.get("models")
    if models_raw is None:
        models_raw = default_models()
    _expect(models_raw, "models", list, "a list")
    if not models_raw:
        _fail("models", "at least one model is required")
    models = tuple(_parse_model(m, f"models[{i}]") for i, m in enumerate(models_raw))
    kinds = [m.kind for m in models]
    for i, k in enumerate(kinds):
        if k in kinds[:i]:
            _fail(f"models[{i}].kind", f"{k!r} is declared twice")
    out["models"] = models

    ens = obj.get("ensemble", default_ensemble() if obj.get("models") is None else None)
    if ens is not None:
        _expect(ens, "ensemble", dict, "an object or null")
        _keys(ens, "ensemble", ("members", "validation_fraction", "refit"))
        members = _expect(ens.get("members"), "ensemble.members", list, "a list of model kinds")
        if not members:
            _fail("ensemble.members", "at least one member is required")
        for i, m in enumerate(members):
            if m not in kinds:
                _fail(f"ensemble.members[{i}]", f"{m!r} is not among the declared models {kinds}")
        vf = ens.get("validation_fraction", 0.2)
        if isinstance(vf, bool) or not isinstance(vf, (int, float)) or not 0 < vf < 1:
            _fail("ensemble.validation_fraction", f"must be in (0, 1), got {vf!r}")
        refit = ens.get("refit", True)
        if not isinstance(refit, bool):
            _fail("ensemble.refit", "expected true or false")
        ens = {"members": list(members), "validation_fraction": float(vf), "refit": refit}
    out["ensemble"] = ens

    cv = dict(base.cv)
    cv.update(_expect(obj.get("cv") or {}, "cv", dict, "an object"))
    _keys(cv, "cv", ("k", "seed"))
    _int(cv["k"], "cv.k", 2)
    _int(cv["seed"], "cv.seed", 0)
    out["cv"] = cv

    ho = dict(base.holdout)
    ho.update(_expect(obj.get("holdout") or {}, "holdout", dict, "an object"))
    _keys(ho, "holdout", ("fraction", "seed"))
    fr = ho["fraction"]
    if isinstance(fr, bool) or not isinstance(fr, (int, float)) or not 0 < fr < 1:
        _fail("holdout.fraction", f"must be in (0, 1), got {fr!r}")
    _int(ho["seed"], "holdout.seed", 0)
    out["holdout"] = ho

    rules = obj.get("outlier_rules", "auto")
    if rules == "auto":
        pass
    elif rules == "default":
        rules = OutlierRules.dataset1_default()
    elif isinstance(rules, dict):
        try:
            rules = OutlierRules.from_json(rules)
        except (KeyError, ValueError, TypeError) as exc:
            _fail("outlier_rules", f"invalid rules: {exc}")
    elif rules is not None:
        _fail("outlier_rules", "expected \"auto\", \"default\", an object or null")
    out["outlier_rules"] = rules

    sm = dict(base.smote)
    sm.update(_expect(obj.get("smote") or {}, "smote", dict, "an object"))
    _keys(sm, "smote", ("enabled", "k"))
    if not isinstance(sm["enabled"], bool):
        _fail("smote.enabled", "expected true or false")
    _int(sm["k"], "smote.k", 1)
    out["smote"] = sm

    out["output_dir"] = _expect(obj.get("output_dir", base.output_dir), "output_dir", str, "a directory path")
    ev = obj.get("emit_votes", False)
    if not isinstance(ev, bool):
        _fail("emit_votes", "expected true or false")
    out["emit_votes"] = ev
    fmt = obj.get("format", base.format)
    if fmt not in FORMATS:
        _fail("format", f"expected one of {', '.join(FORMATS)}, got {fmt!r}")
    out["format"] = fmt
    return ExperimentConfig(**out)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return parse_config(obj)


def default_models() -> list:
    """Every supported learner; KNN and XGB tuned on their default grids."""
    return [
        {"kind": "nb"},
        {"kind": "lr"},
        {"kind": "dt"},
        {"kind": "knn", "grid": "default"},
        {"kind": "xgb", "grid": "default"},
        {"kind": "cnn"},
        {"kind": "lstm"},
        {"kind": "cnn_lstm"},
    ]


def default_ensemble() -> dict:
    return {"members": ["cnn", "lstm", "knn", "xgb"], "validation_fraction": 0.2, "refit": True}
