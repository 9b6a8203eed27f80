"""Positive-class precision/recall/F1 with explicit zero-denominator handling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class PRF1:
    precision: float
    recall: float
    f1: float
    # Names of metrics whose denominator was zero and were set to 0 by convention.
    undefined: tuple[str, ...] = field(default_factory=tuple)


def counts_from_predictions(pairs: Iterable[tuple[int, int]]) -> ConfusionCounts:
    """Confusion counts from (predicted, gold) binary pairs."""
    tp = fp = fn = tn = 0
    for pred, gold in pairs:
        if pred == 1 and gold == 1:
            tp += 1
        elif pred == 1 and gold == 0:
            fp += 1
        elif pred == 0 and gold == 1:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp, fp, fn, tn)


def prf1_from_counts(counts: ConfusionCounts) -> PRF1:
    undefined: list[str] = []
    if counts.tp + counts.fp == 0:
        precision = 0.0
        undefined.append("precision")
    else:
        precision = counts.tp / (counts.tp + counts.fp)
    if counts.tp + counts.fn == 0:
        recall = 0.0
        undefined.append("recall")
    else:
        recall = counts.tp / (counts.tp + counts.fn)
    if precision + recall == 0.0:
        f1 = 0.0
        undefined.append("f1")
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return PRF1(precision, recall, f1, tuple(undefined))


def prf1_from_predictions(pairs: Sequence[tuple[int, int]]) -> PRF1:
    return prf1_from_counts(counts_from_predictions(pairs))


def prf1_positive(records) -> PRF1:
    """P/R/F1 on the positive class from records carrying label_pred/label_gold."""
    return prf1_from_predictions([(r.label_pred, r.label_gold) for r in records])
