"""Mention inference from seed mentions or surface strings."""

from salience.enrichment.matching import match_surface
from salience.enrichment.pipeline import (
    MIN_OVERLAP_TOKEN_LEN,
    enrich_corpus,
    enrich_document,
    infer_mentions,
)
from salience.enrichment.recognizers import (
    CapitalizedRunRecognizer,
    RecognizerInterface,
    RecognizerSpan,
    get_recognizer,
)

__all__ = [
    "CapitalizedRunRecognizer",
    "MIN_OVERLAP_TOKEN_LEN",
    "RecognizerInterface",
    "RecognizerSpan",
    "enrich_corpus",
    "enrich_document",
    "get_recognizer",
    "infer_mentions",
    "match_surface",
]
