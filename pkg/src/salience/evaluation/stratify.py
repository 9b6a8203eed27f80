"""Stratified breakdowns by first-mention position and mention frequency."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from salience.evaluation.metrics import (
    PRF1,
    ConfusionCounts,
    counts_from_predictions,
    prf1_from_counts,
)
from salience.evaluation.records import PredictionRecord

POSITION_BUCKETS = ("headline", "first_sentence", "inside_window", "outside_window")

# Boundaries follow the named analysis ranges ("single", "6-10", ">10"); the
# 2-5 cut is inferred and therefore overridable.
DEFAULT_FREQUENCY_BUCKETS: tuple[tuple[int, int | None], ...] = (
    (1, 1),
    (2, 5),
    (6, 10),
    (11, None),
)


def frequency_bucket_label(lo: int, hi: int | None) -> str:
    if hi is None:
        return f">{lo - 1}"
    if lo == hi:
        return str(lo)
    return f"{lo}-{hi}"


@dataclass(frozen=True)
class BucketMetrics:
    support: int
    counts: ConfusionCounts
    metrics: PRF1


@dataclass(frozen=True)
class EvalReport:
    model_id: str
    total: int
    overall_counts: ConfusionCounts
    overall: PRF1
    by_position: dict[str, BucketMetrics]
    by_frequency: dict[str, BucketMetrics]
    abstain_count: int = 0
    schema_version: int = 1


def position_bucket(record: PredictionRecord) -> str:
    """Assign each record to exactly one bucket, highest priority first:
    headline > first sentence > inside window > outside window."""
    if record.in_headline:
        return "headline"
    if record.in_first_sentence:
        return "first_sentence"
    if record.first_mention_in_window:
        return "inside_window"
    return "outside_window"


def _bucket_metrics(records: Sequence[PredictionRecord]) -> BucketMetrics:
    counts = counts_from_predictions([(r.label_pred, r.label_gold) for r in records])
    return BucketMetrics(support=len(records), counts=counts, metrics=prf1_from_counts(counts))


def stratify_by_position(records: Sequence[PredictionRecord]) -> dict[str, BucketMetrics]:
    grouped: dict[str, list[PredictionRecord]] = {name: [] for name in POSITION_BUCKETS}
    for r in records:
        grouped[position_bucket(r)].append(r)
    return {name: _bucket_metrics(rs) for name, rs in grouped.items()}


def stratify_by_frequency(
    records: Sequence[PredictionRecord],
    buckets: tuple[tuple[int, int | None], ...] = DEFAULT_FREQUENCY_BUCKETS,
) -> dict[str, BucketMetrics]:
    grouped: dict[str, list[PredictionRecord]] = {
        frequency_bucket_label(lo, hi): [] for lo, hi in buckets
    }
    for r in records:
        for lo, hi in buckets:
            if r.mention_count >= lo and (hi is None or r.mention_count <= hi):
                grouped[frequency_bucket_label(lo, hi)].append(r)
                break
        else:
            raise ValueError(f"mention_count {r.mention_count} fits no frequency bucket")
    return {name: _bucket_metrics(rs) for name, rs in grouped.items()}


def build_eval_report(
    records: Sequence[PredictionRecord],
    model_id: str | None = None,
    frequency_buckets: tuple[tuple[int, int | None], ...] = DEFAULT_FREQUENCY_BUCKETS,
    abstain_count: int = 0,
) -> EvalReport:
    """Overall positive-class metrics plus both stratifications.

    Bucket supports sum to the total within each stratification, and pooling
    bucket confusion counts reproduces the overall counts exactly.
    """
    counts = counts_from_predictions([(r.label_pred, r.label_gold) for r in records])
    return EvalReport(
        model_id=model_id or (records[0].model_id if records else "unknown"),
        total=len(records),
        overall_counts=counts,
        overall=prf1_from_counts(counts),
        by_position=stratify_by_position(records),
        by_frequency=stratify_by_frequency(records, frequency_buckets),
        abstain_count=abstain_count,
    )
