"""Position and frequency heuristics, plus the frequency-threshold sweep."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from salience.baselines.sentences import first_sentence_boundary, lead_sentence_index, sentence_index_of, sentence_spans
from salience.corpus.model import Corpus, Document, EntityRecord
from salience.evaluation.metrics import prf1_from_predictions


def first_sentence_heuristic(doc: Document, entity: EntityRecord) -> int:
    """1 iff any mention starts inside the first body sentence."""
    boundary = first_sentence_boundary(doc)
    return int(any(m.start < boundary for m in entity.mentions))


def positional_headline(doc: Document, entity: EntityRecord) -> int:
    """1 iff any mention starts within the headline span."""
    h_start, h_end = doc.headline_span
    if h_end == h_start:
        return 0
    return int(any(h_start <= m.start < h_end for m in entity.mentions))


def positional_headline_lead(doc: Document, entity: EntityRecord) -> int:
    """1 iff any mention starts in the headline or in the lead sentence."""
    if positional_headline(doc, entity):
        return 1
    spans = sentence_spans(doc)
    lead = lead_sentence_index(doc)
    if lead >= len(spans):
        return 0
    return int(any(sentence_index_of(spans, m.start) == lead for m in entity.mentions))


def frequency_heuristic(entity: EntityRecord, threshold: int) -> int:
    """1 iff the entity has at least ``threshold`` mentions."""
    return int(len(entity.mentions) >= threshold)


@dataclass(frozen=True)
class SweepRow:
    threshold: int
    precision: float
    recall: float
    f1: float
    is_best: bool


def sweep_frequency_threshold(corpus: Corpus, thresholds: Iterable[int]) -> list[SweepRow]:
    """Evaluate the frequency heuristic at each threshold; flag the best F1.

    Recall is non-increasing in the threshold since predictions can only flip
    from positive to negative as the threshold grows.
    """
    pairs = corpus.iter_examples()
    rows: list[tuple[int, float, float, float]] = []
    for t in thresholds:
        preds = [(frequency_heuristic(e, t), e.label) for _, e in pairs]
        m = prf1_from_predictions(preds)
        rows.append((t, m.precision, m.recall, m.f1))
    if not rows:
        return []
    best_f1 = max(r[3] for r in rows)
    # First threshold achieving the best F1 wins ties, deterministically.
    best_t = next(r[0] for r in rows if r[3] == best_f1)
    return [SweepRow(t, p, r, f, t == best_t) for t, p, r, f in rows]


def write_sweep_csv(rows: Sequence[SweepRow], path: str | Path) -> None:
    """Emit the sweep as ``threshold,precision,recall,f1`` plotting input."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "precision", "recall", "f1"])
        for row in rows:
            writer.writerow([row.threshold, f"{row.precision:.6f}", f"{row.recall:.6f}", f"{row.f1:.6f}"])
