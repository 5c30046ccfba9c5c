"""``cardiohybrid`` command line: prepare, run, ablate, cost, ttest."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..errors import ConfigError, DataError, NumericalError
from ..evaluation import CVSummary, paired_t_test
from ..ingest import BUILTIN_DESCRIPTORS, write_csv
from ..preprocess import clean_table
from .config import ABLATION_KINDS, DATASETS, ExperimentConfig, load_config, parse_config
from .runner import HYBRID, cost_profile, load_dataset, prepare_table, resolve_rules, run_experiment
from .tables import cost_rows_table, emit_tables, to_markdown, write_table


def _detect_descriptor(path: str):
    try:
        with open(path, encoding="utf-8-sig") as fh:
            header = fh.readline()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    delim = ";" if header.count(";") > header.count(",") else ","
    names = [h.strip().strip('"') for h in header.strip().split(delim)]
    for name, desc in BUILTIN_DESCRIPTORS.items():
        if names == desc.names:
            return name
    raise DataError(f"{path}: header matches no built-in schema; give a descriptor in the config")


def build_config(args) -> ExperimentConfig:
    obj = {}
    if args.config:
        obj = load_config(args.config).to_json()
    if args.dataset is not None:
        if args.dataset in DATASETS:
            obj["dataset"] = args.dataset
        else:
            obj["dataset"] = "custom"
            obj["data_path"] = args.dataset
            if not obj.get("descriptor"):
                obj["descriptor"] = _detect_descriptor(args.dataset)
    if args.data_path is not None:
        obj["data_path"] = args.data_path
    if args.seed is not None:
        obj["cv"] = {**obj.get("cv", {}), "seed": args.seed}
        obj["holdout"] = {**obj.get("holdout", {}), "seed": args.seed}
    if args.subsample is not None:
        obj["subsample"] = args.subsample
    if args.out is not None:
        obj["output_dir"] = args.out
    if getattr(args, "emit_votes", False):
        obj["emit_votes"] = True
    if args.format is not None:
        obj["format"] = args.format
    return parse_config(obj)


def ablation_config(cfg: ExperimentConfig) -> ExperimentConfig:
    """CNN, LSTM and CNN-LSTM alone plus the hybrid and its classical members."""
    declared = {m.kind: m.to_json() for m in cfg.models}
    ens = cfg.ensemble or {"members": ["cnn", "lstm", "knn", "xgb"], "validation_fraction": 0.2, "refit": True}
    kinds = list(ABLATION_KINDS) + [m for m in ens["members"] if m not in ABLATION_KINDS]
    models = [declared.get(k, {"kind": k}) for k in kinds]
    return cfg.replace(models=models, ensemble=ens)


def write_outputs(bundle, cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "bundle.json").write_text(bundle.dumps(), encoding="utf-8")
    (out / "timings.json").write_text(json.dumps(bundle.timings(), indent=2, sort_keys=True) + "\n",
                                      encoding="utf-8")
    emit_tables(bundle, out, cfg.format)
    if cfg.emit_votes:
        with open(out / "votes.jsonl", "w", encoding="utf-8") as fh:
            for v in bundle.votes:
                fh.write(json.dumps(v, sort_keys=True) + "\n")
    return out


def _log(quiet):
    return (lambda msg: None) if quiet else (lambda msg: print(msg, file=sys.stderr))


def cmd_prepare(args):
    cfg = build_config(args)
    raw = load_dataset(cfg)
    table, report = clean_table(raw, resolve_rules(cfg, raw))
    print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        write_csv(table, Path(args.out) / "cleaned.csv")
    return 0


def _run(cfg, args):
    bundle = run_experiment(cfg, _log(args.quiet))
    out = write_outputs(bundle, cfg)
    print(to_markdown(*_summary_rows(bundle)), end="")
    print(f"outputs written to {out}", file=sys.stderr)
    return 0


def _summary_rows(bundle):
    from .tables import comparison_table

    return comparison_table(bundle)


def cmd_run(args):
    return _run(build_config(args), args)


def cmd_ablate(args):
    return _run(ablation_config(build_config(args)), args)


def cmd_cost(args):
    cfg = build_config(args)
    table, _ = prepare_table(cfg)
    from ..evaluation import PreprocessConfig

    pcfg = PreprocessConfig(smote=cfg.smote["enabled"], smote_k=cfg.smote["k"])
    rows = cost_profile(cfg.models, table, args.folds, cfg.cv["seed"], pcfg, cfg.ensemble)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_table(out, "cost", *cost_rows_table(rows), cfg.format)
    print(to_markdown(*cost_rows_table(rows)), end="")
    return 0


def _summary_from(path, kind):
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not a JSON bundle: {exc}") from None
    if kind == HYBRID:
        if not obj.get("ensemble"):
            raise ConfigError(f"{path} has no hybrid results")
        return CVSummary.from_json(obj["ensemble"])
    if kind not in obj.get("cv", {}):
        raise ConfigError(f"model {kind!r} not found in {path}; available: {sorted(obj.get('cv', {}))}")
    return CVSummary.from_json(obj["cv"][kind])


def cmd_ttest(args):
    a = _summary_from(args.bundle_a, args.model)
    b = _summary_from(args.bundle_b, args.model_b or args.model)
    try:
        res = paired_t_test(a.values(args.metric), b.values(args.metric))
    except ValueError as exc:
        raise NumericalError(str(exc)) from None
    print(json.dumps({"metric": args.metric, "a": a.model, "b": b.model, **res.to_json()}, sort_keys=True))
    return 0


def _common(p):
    p.add_argument("config", nargs="?", help="JSON experiment config")
    p.add_argument("--dataset", help="dataset1, dataset2, synthetic, or a CSV path")
    p.add_argument("--data-path", help="CSV file for dataset1 / dataset2")
    p.add_argument("--seed", type=int, help="seed for folds, holdout split and models")
    p.add_argument("--subsample", type=int, help="stratified row subsample after cleaning")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=("markdown", "csv", "both"))
    p.add_argument("--quiet", action="store_true", help="no progress messages")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cardiohybrid", description="Hybrid CNN/LSTM/KNN/XGB experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("prepare", help="clean a dataset and report retained row counts")
    _common(p)
    p.set_defaults(func=cmd_prepare)
    for name, func, text in (("run", cmd_run, "full experiment"),
                             ("ablate", cmd_ablate, "CNN / LSTM / CNN-LSTM / hybrid only")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--emit-votes", action="store_true", help="write per-row vote traces to votes.jsonl")
        p.set_defaults(func=func)
    p = sub.add_parser("cost", help="parameter counts and per-fold training time")
    _common(p)
    p.add_argument("--folds", type=int, default=3)
    p.set_defaults(func=cmd_cost)
    p = sub.add_parser("ttest", help="paired t-test between two bundles")
    p.add_argument("bundle_a")
    p.add_argument("bundle_b")
    p.add_argument("--model", default=HYBRID)
    p.add_argument("--model-b")
    p.add_argument("--metric", default="accuracy",
                   choices=("accuracy", "precision", "recall", "f1", "specificity"))
    p.set_defaults(func=cmd_ttest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
