from .cleaning import (
    BPCategory,
    CleaningReport,
    Imputer,
    OutlierRules,
    age_days_to_years,
    categorize_bp,
    clean_table,
    deduplicate,
    drop_missing_target,
    filter_outliers,
    transform_dataset1,
)
from .encoding import (
    ColumnEncoding,
    EncodingMap,
    FeatureMatrix,
    NormalizationParams,
    apply_encoding,
    apply_normalizer,
    encode,
    fit_encoding,
    fit_normalizer,
)
from .smote import smote_oversample
from .split import split_holdout, stratified_subsample

__all__ = [
    "BPCategory",
    "CleaningReport",
    "ColumnEncoding",
    "EncodingMap",
    "FeatureMatrix",
    "Imputer",
    "NormalizationParams",
    "OutlierRules",
    "age_days_to_years",
    "apply_encoding",
    "apply_normalizer",
    "categorize_bp",
    "clean_table",
    "deduplicate",
    "drop_missing_target",
    "encode",
    "filter_outliers",
    "fit_encoding",
    "fit_normalizer",
    "smote_oversample",
    "split_holdout",
    "stratified_subsample",
    "transform_dataset1",
]
