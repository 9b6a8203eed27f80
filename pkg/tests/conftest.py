from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path

import pytest

from salience.corpus.loaders import load_corpus
from salience.corpus.model import Document, EntityRecord, Mention, Provenance, SourceDataset

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture()
def tiny_corpus():
    return load_corpus(FIXTURES / "tiny_corpus.jsonl")


def make_doc(
    headline: str,
    rest: str,
    doc_id: str = "doc-1",
    published: datetime | None = None,
) -> Document:
    body = headline + "\n" + rest if headline else rest
    return Document(
        doc_id=doc_id,
        headline=headline,
        body=body,
        published_at=published or datetime(2021, 3, 14, tzinfo=timezone.utc),
        source_dataset=SourceDataset.SYNTHETIC,
    )


def entity_with_spans(
    doc: Document,
    name: str,
    spans: list[tuple[int, int]],
    label: int = 0,
    entity_id: str = "ent-1",
    provenance: Provenance = Provenance.GOLD,
) -> EntityRecord:
    mentions = [Mention(s, e, doc.body[s:e], provenance) for s, e in sorted(spans)]
    return EntityRecord(entity_id=entity_id, name=name, mentions=mentions, label=label)


@pytest.fixture()
def musk_doc() -> Document:
    return make_doc(
        "Musk completes $44 billion Twitter deal",
        "Elon Musk, the world's richest man, signed the papers.",
        doc_id="musk-1",
    )


@pytest.fixture()
def musk_entity(musk_doc: Document) -> EntityRecord:
    # First mention is the short form; the full form appears later.
    start = musk_doc.body.index("Elon Musk")
    return entity_with_spans(
        musk_doc,
        "Elon Musk",
        [(0, 4), (start, start + len("Elon Musk"))],
        label=1,
        entity_id="elon-musk",
    )
