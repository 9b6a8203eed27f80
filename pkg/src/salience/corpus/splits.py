"""Temporal train/validation/test splitting.

Documents are sorted by publication time (ties broken by doc_id so splits are
deterministic across runs) and partitioned contiguously, so every timestamp in
an earlier split precedes every timestamp in a later one. All examples of a
document travel with the document.
"""

from __future__ import annotations

from salience.corpus.model import Corpus, Document
from salience.errors import ConfigError, MissingTimestamp

# Default proportions for carving a validation set out of an existing
# training set (datasets shipped with train/test but no validation).
DEFAULT_TRAIN_VAL_RATIO = (0.78, 0.22)


def temporal_split(
    corpus: Corpus, ratios: tuple[float, float, float]
) -> tuple[Corpus, Corpus, Corpus]:
    """Split into (train, val, test) by ascending publication time.

    ``ratios`` must sum to 1 (tolerance 1e-9). Raises MissingTimestamp listing
    the offending doc_ids if any document lacks ``published_at``.
    """
    if len(ratios) != 3 or any(r < 0 for r in ratios):
        raise ConfigError(f"ratios must be three non-negative numbers, got {ratios!r}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigError(f"ratios must sum to 1, got {sum(ratios)!r}")

    missing = [d.doc_id for d in corpus.documents if d.published_at is None]
    if missing:
        raise MissingTimestamp(missing)

    docs = sorted(corpus.documents, key=lambda d: (d.published_at, d.doc_id))
    n = len(docs)
    cut1 = round(ratios[0] * n)
    cut2 = round((ratios[0] + ratios[1]) * n)
    parts = (docs[:cut1], docs[cut1:cut2], docs[cut2:])

    grouped: dict[str, list] = {d.doc_id: [] for d in corpus.documents}
    for doc_id, entity in corpus.examples:
        grouped[doc_id].append(entity)

    def subcorpus(part: list[Document]) -> Corpus:
        sub = Corpus(documents=list(part))
        for doc in part:
            for entity in grouped[doc.doc_id]:
                sub.examples.append((doc.doc_id, entity))
        return sub

    return subcorpus(parts[0]), subcorpus(parts[1]), subcorpus(parts[2])
