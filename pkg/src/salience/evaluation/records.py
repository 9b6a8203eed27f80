"""Prediction records carrying the facets used by stratified analysis.

Stratification fields are recomputable from the gold corpus: headline and
first-sentence membership come from the frozen sentence segmentation, and
window membership from the shared tokenizer at the stated max length (so
heuristic and encoder models land on the same axis).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from salience.baselines.sentences import lead_sentence_index, sentence_index_of, sentence_spans
from salience.corpus.model import Corpus, Document, EntityRecord
from salience.cross_encoder.inputs import InputMode, build_input
from salience.cross_encoder.tokenizer import HashingTokenizer


@dataclass(frozen=True)
class PredictionRecord:
    doc_id: str
    entity_id: str
    model_id: str
    score: float | None
    label_pred: int
    label_gold: int
    first_mention_char: int
    mention_count: int
    in_headline: bool
    in_first_sentence: bool
    first_mention_in_window: bool


def stratification_fields(
    doc: Document,
    entity: EntityRecord,
    tokenizer: HashingTokenizer,
    max_len: int = 512,
) -> dict:
    """Facet fields for one example, computed from the corpus itself."""
    first = entity.first_mention
    first_char = first.start if first is not None else len(doc.body)
    spans = sentence_spans(doc)
    first_sentence = sentence_index_of(spans, first_char) if first is not None else -1
    h_start, h_end = doc.headline_span
    in_headline = first is not None and h_start <= first_char < h_end and h_end > h_start
    in_lead = first is not None and first_sentence == lead_sentence_index(doc) and not in_headline
    if first is not None and entity.name.strip():
        enc = build_input(doc, entity, tokenizer, InputMode.ALL_MENTIONS, max_len)
        in_window = enc.wrapped_mention_count > 0
    else:
        in_window = False
    return {
        "first_mention_char": first_char,
        "mention_count": len(entity.mentions),
        "in_headline": bool(in_headline),
        "in_first_sentence": bool(in_lead),
        "first_mention_in_window": bool(in_window),
    }


def build_records(
    corpus: Corpus,
    predictions: list[dict],
    model_id: str,
    tokenizer: HashingTokenizer | None = None,
    max_len: int = 512,
) -> list[PredictionRecord]:
    """Join raw prediction dicts (doc_id, entity_id, score, label_pred) with
    gold labels and recomputed stratification facets."""
    tokenizer = tokenizer if tokenizer is not None else HashingTokenizer()
    by_key: dict[tuple[str, str], tuple[Document, EntityRecord]] = {
        (doc.doc_id, e.entity_id): (doc, e) for doc, e in corpus.iter_examples()
    }
    records = []
    for pred in predictions:
        key = (pred["doc_id"], pred["entity_id"])
        if key not in by_key:
            raise KeyError(f"prediction for unknown example {key}")
        doc, entity = by_key[key]
        facets = stratification_fields(doc, entity, tokenizer, max_len)
        records.append(
            PredictionRecord(
                doc_id=doc.doc_id,
                entity_id=entity.entity_id,
                model_id=pred.get("model_id", model_id),
                score=pred.get("score"),
                label_pred=int(pred["label_pred"]),
                label_gold=entity.label,
                **facets,
            )
        )
    return records


def write_records(records: list[PredictionRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(asdict(r), sort_keys=True))
            fh.write("\n")


def read_records(path: str | Path) -> list[PredictionRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(PredictionRecord(**json.loads(line)))
    return records
