"""Tabular features feeding the boosted-tree baseline."""

from __future__ import annotations

from dataclasses import dataclass

from salience.baselines.sentences import sentence_index_of, sentence_spans
from salience.corpus.model import Document, EntityRecord


@dataclass(frozen=True)
class FeatureVector:
    """Earliest-mention sentence index (headline = 0) and mention count."""

    first_sentence_index: int
    mention_frequency: int

    def __post_init__(self) -> None:
        if self.first_sentence_index < 0 or self.mention_frequency < 0:
            raise ValueError(f"negative feature value: {self}")

    def as_tuple(self) -> tuple[int, int]:
        return (self.first_sentence_index, self.mention_frequency)


def extract_features(doc: Document, entity: EntityRecord) -> FeatureVector:
    """Compute the feature vector for one enriched (document, entity) pair."""
    spans = sentence_spans(doc)
    first = entity.first_mention
    index = sentence_index_of(spans, first.start) if first is not None else len(spans)
    return FeatureVector(first_sentence_index=index, mention_frequency=len(entity.mentions))
