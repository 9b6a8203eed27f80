"""Positive-class metrics, stratified analysis, and report emission."""

from salience.evaluation.metrics import (
    PRF1,
    ConfusionCounts,
    counts_from_predictions,
    prf1_from_counts,
    prf1_from_predictions,
    prf1_positive,
)
from salience.evaluation.records import (
    PredictionRecord,
    build_records,
    read_records,
    stratification_fields,
    write_records,
)
from salience.evaluation.report import (
    ReportFormat,
    emit_report,
    report_to_csv,
    report_to_json,
    report_to_markdown,
)
from salience.evaluation.stratify import (
    DEFAULT_FREQUENCY_BUCKETS,
    POSITION_BUCKETS,
    BucketMetrics,
    EvalReport,
    build_eval_report,
    position_bucket,
    stratify_by_frequency,
    stratify_by_position,
)

__all__ = [
    "BucketMetrics",
    "ConfusionCounts",
    "DEFAULT_FREQUENCY_BUCKETS",
    "EvalReport",
    "POSITION_BUCKETS",
    "PRF1",
    "PredictionRecord",
    "ReportFormat",
    "build_eval_report",
    "build_records",
    "counts_from_predictions",
    "emit_report",
    "position_bucket",
    "prf1_from_counts",
    "prf1_from_predictions",
    "prf1_positive",
    "read_records",
    "report_to_csv",
    "report_to_json",
    "report_to_markdown",
    "stratification_fields",
    "stratify_by_frequency",
    "stratify_by_position",
    "write_records",
]
