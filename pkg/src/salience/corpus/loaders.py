"""Dataset loaders and the normalized JSONL interchange format.

Normalized schema, one document per JSON line:

    {"doc_id": ..., "headline": ..., "body": ..., "published_at": RFC 3339 | null,
     "source_dataset": "NYT|WN|SEL|ENTSUM|SYNTHETIC",
     "entities": [{"entity_id": ..., "name": ..., "aliases": [...],
                   "label": 0|1, "raw_label": int | float | null,
                   "mentions": [{"start": ..., "end": ..., "surface": ...,
                                 "provenance": "GOLD|NER_MATCHED|PATTERN_MATCHED"}]}]}

Raw licensed corpora are not bundled; the per-dataset adapters below consume
user-supplied exports. Each adapter documents the upstream field names it
reads. All adapters compose ``body`` so it begins with the headline (inline)
and shift mention offsets accordingly. Loaders are pure functions of their
input files, so separate files can be loaded in parallel.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from salience.corpus.labels import binarize_entsum_score, binarize_sel_label
from salience.corpus.model import (
    Corpus,
    Document,
    EntityRecord,
    Mention,
    Provenance,
    SourceDataset,
    compose_body,
    validate_corpus,
)
from salience.errors import MalformedRecord, UnknownFormat


def parse_timestamp(value: str | None, line: int) -> datetime | None:
    if value is None:
        return None
    try:
        ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError as exc:
        raise MalformedRecord(f"bad timestamp {value!r}: {exc}", line=line, field="published_at")
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime | None) -> str | None:
    if ts is None:
        return None
    return ts.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _require(record: dict[str, Any], key: str, line: int) -> Any:
    if key not in record:
        raise MalformedRecord("missing field", line=line, field=key)
    return record[key]


def _read_jsonl(path: str | Path) -> list[tuple[int, dict[str, Any]]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for i, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                rows.append((i, json.loads(raw)))
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"invalid JSON: {exc}", line=i)
    return rows


# --- normalized format --------------------------------------------------------

def _mention_from_json(obj: dict[str, Any], line: int) -> Mention:
    try:
        return Mention(
            start=int(_require(obj, "start", line)),
            end=int(_require(obj, "end", line)),
            surface=_require(obj, "surface", line),
            provenance=Provenance(_require(obj, "provenance", line)),
        )
    except ValueError as exc:
        raise MalformedRecord(str(exc), line=line, field="mentions")


def _entity_from_json(obj: dict[str, Any], line: int) -> EntityRecord:
    return EntityRecord(
        entity_id=str(_require(obj, "entity_id", line)),
        name=_require(obj, "name", line),
        aliases=list(obj.get("aliases") or []),
        mentions=[_mention_from_json(m, line) for m in obj.get("mentions") or []],
        label=int(_require(obj, "label", line)),
        raw_label=obj.get("raw_label"),
    )


def _load_normalized(path: str | Path) -> Corpus:
    corpus = Corpus()
    for line, record in _read_jsonl(path):
        doc = Document(
            doc_id=str(_require(record, "doc_id", line)),
            headline=_require(record, "headline", line),
            body=_require(record, "body", line),
            published_at=parse_timestamp(record.get("published_at"), line),
            source_dataset=SourceDataset(_require(record, "source_dataset", line)),
        )
        corpus.documents.append(doc)
        for obj in record.get("entities") or []:
            corpus.examples.append((doc.doc_id, _entity_from_json(obj, line)))
    return corpus


def document_to_json(doc: Document, entities: list[EntityRecord]) -> dict[str, Any]:
    return {
        "doc_id": doc.doc_id,
        "headline": doc.headline,
        "body": doc.body,
        "published_at": format_timestamp(doc.published_at),
        "source_dataset": doc.source_dataset.value,
        "entities": [
            {
                "entity_id": e.entity_id,
                "name": e.name,
                "aliases": list(e.aliases),
                "label": e.label,
                "raw_label": e.raw_label,
                "mentions": [
                    {
                        "start": m.start,
                        "end": m.end,
                        "surface": m.surface,
                        "provenance": m.provenance.value,
                    }
                    for m in e.mentions
                ],
            }
            for e in entities
        ],
    }


def save_normalized(corpus: Corpus, path: str | Path) -> None:
    """Write the corpus in the normalized JSONL schema (deterministic bytes)."""
    grouped: dict[str, list[EntityRecord]] = {d.doc_id: [] for d in corpus.documents}
    for doc_id, entity in corpus.examples:
        grouped[doc_id].append(entity)
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            fh.write(json.dumps(document_to_json(doc, grouped[doc.doc_id]), ensure_ascii=False))
            fh.write("\n")


# --- first-mention adapters (NYT, WN) ------------------------------------------

def _load_first_mention(path: str | Path, source: SourceDataset) -> Corpus:
    """Adapter for exports that carry only the first mention of each entity.

    Upstream fields per document line: ``doc_id``, ``headline``, ``body``,
    ``published_at``, ``entities``; per entity: ``entity_id``, ``name``,
    ``salient`` (0/1), ``first_mention`` as ``[start, end]`` offsets into the
    supplied body text.
    """
    corpus = Corpus()
    for line, record in _read_jsonl(path):
        headline = _require(record, "headline", line)
        body, shift = compose_body(headline, _require(record, "body", line))
        doc = Document(
            doc_id=str(_require(record, "doc_id", line)),
            headline=headline,
            body=body,
            published_at=parse_timestamp(record.get("published_at"), line),
            source_dataset=source,
        )
        corpus.documents.append(doc)
        for obj in record.get("entities") or []:
            pair = _require(obj, "first_mention", line)
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise MalformedRecord(
                    f"first_mention must be [start, end], got {pair!r}",
                    line=line,
                    field="first_mention",
                )
            start, end = int(pair[0]) + shift, int(pair[1]) + shift
            if not (0 <= start < end <= len(body)):
                raise MalformedRecord(
                    f"first_mention [{start}, {end}) outside body", line=line, field="first_mention"
                )
            mention = Mention(start, end, body[start:end], Provenance.GOLD)
            corpus.examples.append(
                (
                    doc.doc_id,
                    EntityRecord(
                        entity_id=str(_require(obj, "entity_id", line)),
                        name=_require(obj, "name", line),
                        mentions=[mention],
                        label=int(_require(obj, "salient", line)),
                    ),
                )
            )
    return corpus


# --- SEL adapter ---------------------------------------------------------------

def _load_sel(path: str | Path) -> Corpus:
    """Adapter for SEL-style exports: surfaces without offsets, 4-class ranks.

    Upstream fields per document line: ``doc_id``, ``headline``, ``body``,
    ``published_at``, ``entities``; per entity: ``entity_id``, ``name``,
    ``surfaces`` (list of mention surface strings), ``salience_rank`` in 0..3.
    Offsets are resolved later by enrichment; the rank is kept in ``raw_label``.
    """
    corpus = Corpus()
    for line, record in _read_jsonl(path):
        headline = _require(record, "headline", line)
        body, _ = compose_body(headline, _require(record, "body", line))
        doc = Document(
            doc_id=str(_require(record, "doc_id", line)),
            headline=headline,
            body=body,
            published_at=parse_timestamp(record.get("published_at"), line),
            source_dataset=SourceDataset.SEL,
        )
        corpus.documents.append(doc)
        for obj in record.get("entities") or []:
            rank = int(_require(obj, "salience_rank", line))
            corpus.examples.append(
                (
                    doc.doc_id,
                    EntityRecord(
                        entity_id=str(_require(obj, "entity_id", line)),
                        name=_require(obj, "name", line),
                        aliases=list(obj.get("surfaces") or []),
                        mentions=[],
                        label=binarize_sel_label(rank),
                        raw_label=rank,
                    ),
                )
            )
    return corpus


# --- EntSUM adapter --------------------------------------------------------------

def _load_entsum(path: str | Path) -> Corpus:
    """Adapter for EntSUM-style exports: explicit mention offsets, mean scores.

    Upstream fields per document line: ``doc_id``, ``headline``, ``body``,
    ``published_at``, ``entities``; per entity: ``entity_id``, ``name``,
    ``mentions`` as ``[[start, end], ...]`` offsets into the supplied body,
    ``mean_salience`` in [0, 3]. The mean score is kept in ``raw_label``.
    """
    corpus = Corpus()
    for line, record in _read_jsonl(path):
        headline = _require(record, "headline", line)
        body, shift = compose_body(headline, _require(record, "body", line))
        doc = Document(
            doc_id=str(_require(record, "doc_id", line)),
            headline=headline,
            body=body,
            published_at=parse_timestamp(record.get("published_at"), line),
            source_dataset=SourceDataset.ENTSUM,
        )
        corpus.documents.append(doc)
        for obj in record.get("entities") or []:
            mentions = []
            for pair in _require(obj, "mentions", line):
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise MalformedRecord(
                        f"mentions entries must be [start, end], got {pair!r}",
                        line=line,
                        field="mentions",
                    )
                start, end = int(pair[0]) + shift, int(pair[1]) + shift
                if not (0 <= start < end <= len(body)):
                    raise MalformedRecord(
                        f"mention [{start}, {end}) outside body", line=line, field="mentions"
                    )
                mentions.append(Mention(start, end, body[start:end], Provenance.GOLD))
            mentions.sort(key=lambda m: (m.start, m.end))
            score = float(_require(obj, "mean_salience", line))
            corpus.examples.append(
                (
                    doc.doc_id,
                    EntityRecord(
                        entity_id=str(_require(obj, "entity_id", line)),
                        name=_require(obj, "name", line),
                        mentions=mentions,
                        label=binarize_entsum_score(score),
                        raw_label=score,
                    ),
                )
            )
    return corpus


_ADAPTERS = {
    "NORMALIZED_JSONL": _load_normalized,
    "NYT": lambda path: _load_first_mention(path, SourceDataset.NYT),
    "WN": lambda path: _load_first_mention(path, SourceDataset.WN),
    "SEL": _load_sel,
    "ENTSUM": _load_entsum,
}


def load_corpus(path: str | Path, format: str = "NORMALIZED_JSONL") -> Corpus:
    """Load a corpus from ``path`` using the named format adapter.

    Accepted formats: NYT, WN, SEL, ENTSUM, NORMALIZED_JSONL. The result is
    validated against the corpus invariants before being returned.
    """
    key = format.upper()
    if key not in _ADAPTERS:
        raise UnknownFormat(f"unknown format {format!r}; expected one of {sorted(_ADAPTERS)}")
    if not Path(path).exists():
        raise FileNotFoundError(f"corpus file not found: {path}")
    corpus = _ADAPTERS[key](path)
    validate_corpus(corpus)
    return corpus
