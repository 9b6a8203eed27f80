"""Normalized data model, dataset loaders, label mappers, temporal splits."""

from salience.corpus.labels import binarize_entsum_score, binarize_sel_label
from salience.corpus.loaders import load_corpus, save_normalized
from salience.corpus.model import (
    Corpus,
    CorpusStats,
    Document,
    EntityRecord,
    Mention,
    Provenance,
    SourceDataset,
    compose_body,
    corpus_stats,
    validate_corpus,
    validate_mentions,
)
from salience.corpus.splits import DEFAULT_TRAIN_VAL_RATIO, temporal_split

__all__ = [
    "Corpus",
    "CorpusStats",
    "DEFAULT_TRAIN_VAL_RATIO",
    "Document",
    "EntityRecord",
    "Mention",
    "Provenance",
    "SourceDataset",
    "binarize_entsum_score",
    "binarize_sel_label",
    "compose_body",
    "corpus_stats",
    "load_corpus",
    "save_normalized",
    "temporal_split",
    "validate_corpus",
    "validate_mentions",
]
