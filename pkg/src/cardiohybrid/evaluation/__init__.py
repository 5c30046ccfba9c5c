"""Metrics, cross-validation, grid search and significance testing."""

from .cv import (
    SYNTHETIC,
    CVSummary,
    FoldData,
    PreprocessConfig,
    grid_cells,
    grid_search,
    make_folds,
    n_threads,
    prepare_fold,
    run_cv,
    stratified_kfold,
    summarize,
)
from .metrics import METRIC_NAMES, ConfusionMatrix, MetricsReport, confusion, mean_std, metrics, score
from .stats import TTestResult, betainc, paired_t_test, t_cdf, t_two_sided_p

__all__ = [
    "CVSummary",
    "ConfusionMatrix",
    "FoldData",
    "METRIC_NAMES",
    "MetricsReport",
    "PreprocessConfig",
    "SYNTHETIC",
    "TTestResult",
    "betainc",
    "confusion",
    "grid_cells",
    "grid_search",
    "make_folds",
    "mean_std",
    "metrics",
    "n_threads",
    "paired_t_test",
    "prepare_fold",
    "run_cv",
    "score",
    "stratified_kfold",
    "summarize",
    "t_cdf",
    "t_two_sided_p",
]
