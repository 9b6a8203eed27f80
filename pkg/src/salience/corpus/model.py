"""Normalized data model: documents, mentions, entity records, corpora.

Character offsets everywhere are Unicode code-point offsets into ``body``,
never bytes. ``body`` always begins with the headline followed by a newline
(when the headline is non-empty), so headline features and decile positions
are computed against one consistent text.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum

from salience.errors import MalformedRecord


class SourceDataset(str, Enum):
    NYT = "NYT"
    WN = "WN"
    SEL = "SEL"
    ENTSUM = "ENTSUM"
    SYNTHETIC = "SYNTHETIC"


class Provenance(str, Enum):
    GOLD = "GOLD"
    NER_MATCHED = "NER_MATCHED"
    PATTERN_MATCHED = "PATTERN_MATCHED"


@dataclass(frozen=True, order=True)
class Mention:
    """A contiguous character span ``body[start:end]`` referring to an entity."""

    start: int
    end: int
    surface: str
    provenance: Provenance = Provenance.GOLD

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise MalformedRecord(f"bad mention span [{self.start}, {self.end})")

    def overlaps(self, other: "Mention") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass
class Document:
    doc_id: str
    headline: str
    body: str
    published_at: datetime | None
    source_dataset: SourceDataset = SourceDataset.SYNTHETIC

    def __post_init__(self) -> None:
        if not self.body:
            raise MalformedRecord("empty body", field="body")
        if self.published_at is not None and self.published_at.tzinfo is None:
            # Naive timestamps are taken as UTC so sorting is well defined.
            self.published_at = self.published_at.replace(tzinfo=timezone.utc)

    @property
    def headline_span(self) -> tuple[int, int]:
        """Span of the inline headline within ``body`` (empty span if none)."""
        if self.headline and self.body.startswith(self.headline):
            return (0, len(self.headline))
        return (0, 0)


@dataclass
class EntityRecord:
    entity_id: str
    name: str
    aliases: list[str] = field(default_factory=list)
    mentions: list[Mention] = field(default_factory=list)
    label: int = 0
    raw_label: int | float | None = None

    def __post_init__(self) -> None:
        if self.label not in (0, 1):
            raise MalformedRecord(f"label must be 0 or 1, got {self.label!r}", field="label")

    @property
    def first_mention(self) -> Mention | None:
        return self.mentions[0] if self.mentions else None

    @property
    def gold_mentions(self) -> list[Mention]:
        return [m for m in self.mentions if m.provenance is Provenance.GOLD]

    def with_mentions(self, mentions: list[Mention]) -> "EntityRecord":
        return replace(self, mentions=sorted(mentions, key=lambda m: (m.start, m.end)))


@dataclass
class Corpus:
    documents: list[Document] = field(default_factory=list)
    examples: list[tuple[str, EntityRecord]] = field(default_factory=list)

    def doc_by_id(self) -> dict[str, Document]:
        return {d.doc_id: d for d in self.documents}

    def iter_examples(self) -> list[tuple[Document, EntityRecord]]:
        by_id = self.doc_by_id()
        return [(by_id[doc_id], entity) for doc_id, entity in self.examples]

    def entities_of(self, doc_id: str) -> list[EntityRecord]:
        return [e for d, e in self.examples if d == doc_id]

    def __len__(self) -> int:
        return len(self.examples)


def validate_mentions(doc: Document, entity: EntityRecord) -> None:
    """Check offset validity, ordering, and non-overlap for one entity."""
    prev: Mention | None = None
    for m in entity.mentions:
        if m.end > len(doc.body):
            raise MalformedRecord(
                f"mention [{m.start}, {m.end}) beyond body of {doc.doc_id}", field="mentions"
            )
        if doc.body[m.start:m.end] != m.surface:
            raise MalformedRecord(
                f"surface {m.surface!r} != body[{m.start}:{m.end}] "
                f"({doc.body[m.start:m.end]!r}) in {doc.doc_id}",
                field="mentions",
            )
        if prev is not None:
            if m.start < prev.start:
                raise MalformedRecord(f"mentions out of order in {doc.doc_id}", field="mentions")
            if prev.overlaps(m):
                raise MalformedRecord(
                    f"overlapping mentions of {entity.entity_id} in {doc.doc_id}",
                    field="mentions",
                )
        prev = m


def validate_corpus(corpus: Corpus) -> None:
    """Check the corpus-level invariants.

    Raises MalformedRecord on duplicate doc ids, dangling example doc ids,
    duplicate (doc_id, entity_id) pairs, or invalid mention sets.
    """
    by_id: dict[str, Document] = {}
    for doc in corpus.documents:
        if doc.doc_id in by_id:
            raise MalformedRecord(f"duplicate doc_id {doc.doc_id!r}")
        by_id[doc.doc_id] = doc
    seen: set[tuple[str, str]] = set()
    for doc_id, entity in corpus.examples:
        if doc_id not in by_id:
            raise MalformedRecord(f"example references unknown doc_id {doc_id!r}")
        key = (doc_id, entity.entity_id)
        if key in seen:
            raise MalformedRecord(f"duplicate entity {entity.entity_id!r} in doc {doc_id!r}")
        seen.add(key)
        validate_mentions(by_id[doc_id], entity)


@dataclass(frozen=True)
class CorpusStats:
    n_documents: int
    n_examples: int
    n_mentions: int
    salient_fraction: float


def corpus_stats(corpus: Corpus) -> CorpusStats:
    n_mentions = sum(len(e.mentions) for _, e in corpus.examples)
    n_pos = sum(e.label for _, e in corpus.examples)
    frac = n_pos / len(corpus.examples) if corpus.examples else 0.0
    return CorpusStats(
        n_documents=len(corpus.documents),
        n_examples=len(corpus.examples),
        n_mentions=n_mentions,
        salient_fraction=frac,
    )


def compose_body(headline: str, text: str) -> tuple[str, int]:
    """Build the canonical body (headline inline, then text) from raw parts.

    Returns the body and the character shift to apply to offsets that were
    expressed relative to ``text``. If ``text`` already starts with the
    headline, it is used as-is and the shift is zero.
    """
    if not headline:
        return text, 0
    if text.startswith(headline + "\n") or text == headline:
        return text, 0
    return headline + "\n" + text, len(headline) + 1
