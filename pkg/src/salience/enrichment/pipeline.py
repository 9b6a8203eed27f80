"""Mention inference: expand seed mentions/surfaces into full mention sets.

Sources combined per entity:

* gold mentions, preserved verbatim;
* recognizer spans assigned to the entity, either by exact equality with the
  first gold mention's surface or by token overlap with the entity name;
* pattern matches of the entity's known surfaces (name, aliases, gold
  surfaces) over the body.

A span whose surface token-overlaps several candidate entities goes to the one
sharing the most name tokens; ties stay unassigned. Exact-surface matching is
case-sensitive (surfaces quote the text); name overlap is case-insensitive.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from salience.corpus.model import Corpus, Document, EntityRecord, Mention, Provenance
from salience.enrichment.matching import match_surface
from salience.enrichment.recognizers import RecognizerInterface, RecognizerSpan
from salience.errors import NoSeedMention

logger = logging.getLogger(__name__)

_WORD = re.compile(r"\w+")

# Name-overlap assignment rule: a span is a candidate for an entity when they
# share at least MIN_SHARED_TOKENS tokens of length >= MIN_OVERLAP_TOKEN_LEN.
# Both cutoffs are corpus-dependent judgment calls, hence configurable.
MIN_OVERLAP_TOKEN_LEN = 2
MIN_SHARED_TOKENS = 1

_PROVENANCE_RANK = {
    Provenance.GOLD: 0,
    Provenance.NER_MATCHED: 1,
    Provenance.PATTERN_MATCHED: 2,
}


def _overlap_tokens(text: str, min_len: int) -> set[str]:
    return {t.lower() for t in _WORD.findall(text) if len(t) >= min_len}


@dataclass
class _Candidate:
    entity_index: int
    exact: bool
    shared: int


def _assign_spans(
    entities: list[EntityRecord],
    spans: list[RecognizerSpan],
    min_token_len: int,
    min_shared_tokens: int,
) -> dict[int, list[RecognizerSpan]]:
    """Map entity index -> recognizer spans won by that entity."""
    first_surfaces = []
    name_tokens = []
    for entity in entities:
        gold = entity.gold_mentions
        first_surfaces.append(gold[0].surface if gold else None)
        name_tokens.append(_overlap_tokens(entity.name, min_token_len))

    assigned: dict[int, list[RecognizerSpan]] = {i: [] for i in range(len(entities))}
    for span in spans:
        span_tokens = _overlap_tokens(span.surface, min_token_len)
        candidates = []
        for i in range(len(entities)):
            exact = first_surfaces[i] is not None and span.surface == first_surfaces[i]
            shared = len(span_tokens & name_tokens[i])
            if exact or shared >= min_shared_tokens:
                candidates.append(_Candidate(i, exact, shared))
        if not candidates:
            continue
        exact_hits = [c for c in candidates if c.exact]
        pool = exact_hits if exact_hits else candidates
        best = max(c.shared for c in pool)
        winners = [c for c in pool if c.shared == best]
        if len(winners) == 1:
            assigned[winners[0].entity_index].append(span)
        # Tied spans stay unassigned: ambiguity is left out rather than guessed.
    return assigned


def _resolve_overlaps(candidates: list[Mention]) -> list[Mention]:
    """Deduplicate by span and drop overlaps; gold always survives."""
    by_span: dict[tuple[int, int], Mention] = {}
    for m in sorted(candidates, key=lambda m: _PROVENANCE_RANK[m.provenance]):
        by_span.setdefault((m.start, m.end), m)
    kept: list[Mention] = [m for m in by_span.values() if m.provenance is Provenance.GOLD]
    rest = [m for m in by_span.values() if m.provenance is not Provenance.GOLD]
    # Longer spans first at the same start so "Elon Musk" beats its inner "Musk".
    rest.sort(key=lambda m: (m.start, m.start - m.end, _PROVENANCE_RANK[m.provenance]))
    for m in rest:
        if not any(m.overlaps(k) for k in kept):
            kept.append(m)
    kept.sort(key=lambda m: (m.start, m.end))
    return kept


def _entity_surfaces(entity: EntityRecord) -> list[str]:
    seen: list[str] = []
    for surface in [entity.name, *entity.aliases, *(m.surface for m in entity.gold_mentions)]:
        if surface and surface not in seen:
            seen.append(surface)
    return seen


def enrich_document(
    doc: Document,
    entities: list[EntityRecord],
    recognizer: RecognizerInterface | None = None,
    min_token_len: int = MIN_OVERLAP_TOKEN_LEN,
    min_shared_tokens: int = MIN_SHARED_TOKENS,
) -> list[EntityRecord]:
    """Infer full mention sets for all entities of one document.

    Entities compete for ambiguous recognizer spans, so enriching a document
    as a whole is the canonical entry point. Raises NoSeedMention when an
    entity has neither a gold mention nor any surface string.
    """
    for entity in entities:
        if not entity.gold_mentions and not _entity_surfaces(entity):
            raise NoSeedMention(f"entity {entity.entity_id!r} in {doc.doc_id!r} has no seed")

    spans: list[RecognizerSpan] = []
    if recognizer is not None:
        try:
            spans = recognizer.spans(doc.body)
        except Exception:  # degraded mode, not a pipeline failure
            logger.warning(
                "recognizer failed on doc %s; falling back to pattern matching only",
                doc.doc_id,
                exc_info=True,
            )
            spans = []
    assigned = _assign_spans(entities, spans, min_token_len, min_shared_tokens)

    enriched = []
    for i, entity in enumerate(entities):
        candidates = list(entity.gold_mentions)
        for span in assigned[i]:
            candidates.append(
                Mention(span.start, span.end, span.surface, Provenance.NER_MATCHED)
            )
        for surface in _entity_surfaces(entity):
            candidates.extend(match_surface(doc.body, surface))
        mentions = _resolve_overlaps(candidates)
        if not mentions:
            logger.warning(
                "entity %s in doc %s has no resolvable mentions", entity.entity_id, doc.doc_id
            )
        enriched.append(entity.with_mentions(mentions))
    return enriched


def infer_mentions(
    doc: Document,
    entity: EntityRecord,
    recognizer: RecognizerInterface | None = None,
    min_token_len: int = MIN_OVERLAP_TOKEN_LEN,
    min_shared_tokens: int = MIN_SHARED_TOKENS,
) -> EntityRecord:
    """Single-entity enrichment (no competing candidates); idempotent."""
    return enrich_document(doc, [entity], recognizer, min_token_len, min_shared_tokens)[0]


def enrich_corpus(
    corpus: Corpus,
    recognizer: RecognizerInterface | None = None,
    min_token_len: int = MIN_OVERLAP_TOKEN_LEN,
    min_shared_tokens: int = MIN_SHARED_TOKENS,
) -> Corpus:
    """Enrich every document; per-document work is independent."""
    grouped: dict[str, list[EntityRecord]] = {d.doc_id: [] for d in corpus.documents}
    for doc_id, entity in corpus.examples:
        grouped[doc_id].append(entity)
    out = Corpus(documents=list(corpus.documents))
    for doc in corpus.documents:
        for entity in enrich_document(
            doc, grouped[doc.doc_id], recognizer, min_token_len, min_shared_tokens
        ):
            out.examples.append((doc.doc_id, entity))
    return out
