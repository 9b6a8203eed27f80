"""Seeded synthetic corpora for tests, acceptance runs, and demos.

Documents are built from a lowercase filler vocabulary with capitalized
person names inserted at known offsets, so every mention span is exact by
construction. Three generators:

* ``make_rule_corpus`` - salient iff the entity is mentioned in the headline
  or has at least three mentions; headline entities always get extra body
  mentions so the frequency rule alone also separates the classes exactly.
* ``make_late_mention_corpus`` - every entity has one early mention at a
  similar position; salient entities differ only through additional late
  mentions, so hiding non-first mentions hides the signal.
* ``make_enrichment_fixture`` - full mention sets as ground truth plus a
  degraded corpus carrying only the first gold mention of each entity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from salience.corpus.model import (
    Corpus,
    Document,
    EntityRecord,
    Mention,
    Provenance,
    SourceDataset,
)

_FILLER = (
    "council budget season harvest river window cabinet debate market tunnel "
    "garden treaty signal lantern meadow ballot engine quarry saddle archive "
    "housing permit voyage timber ledger corridor station nursery pipeline "
    "summit parade museum quarterly review exhibit furnace almanac lagoon"
).split()

_FIRST_NAMES = (
    "Alba Boris Clara Dmitri Elena Farid Greta Hugo Ines Jonas Katya Lorenz "
    "Mina Nadia Osman Petra Quentin Rosa Stefan Tilda Umar Vera Wilhelm Xenia "
    "Yusuf Zelda Anouk Bram Cecile Davor"
).split()

_LAST_NAMES = (
    "Abelard Brankov Cassidy Dornier Eversley Fontaine Grimaldi Hollande "
    "Ivankov Jellicoe Kessler Lindqvist Moreau Novak Oberlin Pasternak "
    "Quarles Rothwell Sandoval Tereshkova Ulrich Vanterpool Wrenfield "
    "Xanthos Yablonski Zetterberg Ashdown Bellweather Cartwright Delacroix"
).split()

_EPOCH = datetime(2020, 1, 1, 12, 0, 0, tzinfo=timezone.utc)

HEADLINE_SENTENCE = -1  # placement key for the headline


class _DocBuilder:
    """Accumulates text while recording exact character spans."""

    def __init__(self) -> None:
        self._parts: list[str] = []
        self._length = 0

    def add(self, text: str) -> tuple[int, int]:
        start = self._length
        self._parts.append(text)
        self._length += len(text)
        return (start, self._length)

    @property
    def text(self) -> str:
        return "".join(self._parts)


@dataclass
class _EntityPlan:
    entity_id: str
    name: str
    label: int
    spans: list[tuple[int, int, str]] = field(default_factory=list)


def _pick_names(rng: random.Random, n: int) -> list[str]:
    firsts = rng.sample(_FIRST_NAMES, n)
    lasts = rng.sample(_LAST_NAMES, n)
    return [f"{f} {l}" for f, l in zip(firsts, lasts)]


def _render_doc(
    rng: random.Random,
    doc_id: str,
    plans: list[_EntityPlan],
    placements: dict[int, list[tuple[_EntityPlan, str]]],
    n_sentences: int,
    words_per_sentence: int,
    published_at: datetime,
) -> tuple[Document, list[EntityRecord]]:
    """Lay out headline + sentences, inserting placements at random word gaps."""
    builder = _DocBuilder()

    def emit(words: list[str], inserts: list[tuple[_EntityPlan, str]], terminal: str) -> None:
        gaps = sorted(rng.sample(range(len(words) + 1), len(inserts))) if inserts else []
        by_gap: dict[int, list[tuple[_EntityPlan, str]]] = {}
        for gap, ins in zip(gaps, inserts):
            by_gap.setdefault(gap, []).append(ins)
        first = True
        for g in range(len(words) + 1):
            for plan, surface in by_gap.get(g, []):
                if not first:
                    builder.add(" ")
                first = False
                start, end = builder.add(surface)
                plan.spans.append((start, end, surface))
            if g < len(words):
                if not first:
                    builder.add(" ")
                first = False
                builder.add(words[g])
        builder.add(terminal)

    emit(rng.sample(_FILLER, rng.randint(3, 5)), placements.get(HEADLINE_SENTENCE, []), "")
    headline = builder.text
    builder.add("\n")
    for s in range(n_sentences):
        emit(rng.sample(_FILLER, words_per_sentence), placements.get(s, []), ".")
        if s < n_sentences - 1:
            builder.add(" ")

    doc = Document(
        doc_id=doc_id,
        headline=headline,
        body=builder.text,
        published_at=published_at,
        source_dataset=SourceDataset.SYNTHETIC,
    )
    entities = []
    for plan in plans:
        mentions = [
            Mention(start, end, surface, Provenance.GOLD)
            for start, end, surface in sorted(plan.spans)
        ]
        entities.append(
            EntityRecord(
                entity_id=plan.entity_id, name=plan.name, mentions=mentions, label=plan.label
            )
        )
    return doc, entities


def _spread(rng: random.Random, plan: _EntityPlan, sentences: list[int], n: int, surface_for=None):
    """Placement entries for ``n`` mentions of ``plan`` over distinct sentences."""
    out = []
    for s in sorted(rng.sample(sentences, min(n, len(sentences)))):
        surface = surface_for(rng, plan) if surface_for else plan.name
        out.append((s, (plan, surface)))
    return out


def make_rule_corpus(n_docs: int = 500, seed: int = 7) -> Corpus:
    """Corpus where salient iff mentioned in the headline or >= 3 mentions.

    Each document carries four entities: one headline-salient (with enough
    body mentions that the frequency rule agrees), one frequency-salient, one
    single-mention background, one two-mention background. A frequency
    threshold of 3 therefore separates the classes exactly.
    """
    rng = random.Random(seed)
    n_sentences = 6
    corpus = Corpus()
    for i in range(n_docs):
        doc_id = f"syn-{i:04d}"
        names = _pick_names(rng, 4)
        headline_plan = _EntityPlan(f"{doc_id}-e0", names[0], 1)
        frequent_plan = _EntityPlan(f"{doc_id}-e1", names[1], 1)
        single_plan = _EntityPlan(f"{doc_id}-e2", names[2], 0)
        pair_plan = _EntityPlan(f"{doc_id}-e3", names[3], 0)
        plans = [headline_plan, frequent_plan, single_plan, pair_plan]

        body = list(range(n_sentences))
        entries = [(HEADLINE_SENTENCE, (headline_plan, headline_plan.name))]
        entries += _spread(rng, headline_plan, body, rng.randint(2, 4))
        entries += _spread(rng, frequent_plan, body, rng.randint(3, 5))
        entries += _spread(rng, single_plan, body, 1)
        entries += _spread(rng, pair_plan, body, 2)
        placements: dict[int, list[tuple[_EntityPlan, str]]] = {}
        for sentence, ins in entries:
            placements.setdefault(sentence, []).append(ins)

        doc, entities = _render_doc(
            rng, doc_id, plans, placements, n_sentences, 8, _EPOCH + timedelta(days=i)
        )
        corpus.documents.append(doc)
        for e in entities:
            corpus.examples.append((doc_id, e))
    return corpus


def make_late_mention_corpus(n_docs: int = 200, seed: int = 11) -> Corpus:
    """Corpus whose salience signal lives entirely in late mentions.

    Every entity has its first mention in the first body sentence; salient
    entities get three or four additional mentions from sentence 2 onward.
    With only the first mention marked the classes look identical.
    """
    rng = random.Random(seed)
    n_sentences = 7
    corpus = Corpus()
    for i in range(n_docs):
        doc_id = f"late-{i:04d}"
        names = _pick_names(rng, 4)
        plans = [
            _EntityPlan(f"{doc_id}-e{k}", names[k], 1 if k < 2 else 0) for k in range(4)
        ]
        entries = [(0, (p, p.name)) for p in plans]
        for p in plans:
            if p.label == 1:
                entries += _spread(rng, p, list(range(2, n_sentences)), rng.randint(3, 4))
        placements: dict[int, list[tuple[_EntityPlan, str]]] = {}
        for sentence, ins in entries:
            placements.setdefault(sentence, []).append(ins)

        doc, entities = _render_doc(
            rng, doc_id, plans, placements, n_sentences, 8, _EPOCH + timedelta(days=i)
        )
        corpus.documents.append(doc)
        for e in entities:
            corpus.examples.append((doc_id, e))
    return corpus


def make_enrichment_fixture(
    n_docs: int = 50, seed: int = 23
) -> tuple[Corpus, dict[tuple[str, str], set[tuple[int, int]]]]:
    """Degraded corpus (first gold mention only) plus full truth mention sets.

    Truth mentions mix full names, bare last names, bare first names, and a
    sprinkle of lowercased variants that neither pattern matching nor the
    rule recognizer can recover, keeping expected recall below 1.
    """
    rng = random.Random(seed)

    def surface_for(rng: random.Random, plan: _EntityPlan) -> str:
        roll = rng.random()
        first, last = plan.name.split(" ", 1)
        if roll < 0.55:
            return plan.name
        if roll < 0.77:
            return last
        if roll < 0.97:
            return first
        return plan.name.lower()  # unrecoverable on purpose

    full = Corpus()
    n_sentences = 6
    for i in range(n_docs):
        doc_id = f"enr-{i:04d}"
        names = _pick_names(rng, 3)
        plans = [_EntityPlan(f"{doc_id}-e{k}", names[k], k % 2) for k in range(3)]
        body = list(range(n_sentences))
        entries = [(HEADLINE_SENTENCE, (plans[0], plans[0].name))]
        for p in plans:
            entries += _spread(rng, p, body, rng.randint(2, 4), surface_for)
        placements: dict[int, list[tuple[_EntityPlan, str]]] = {}
        for sentence, ins in entries:
            placements.setdefault(sentence, []).append(ins)

        doc, entities = _render_doc(
            rng, doc_id, plans, placements, n_sentences, 8, _EPOCH + timedelta(days=i)
        )
        full.documents.append(doc)
        for e in entities:
            full.examples.append((doc_id, e))

    truth: dict[tuple[str, str], set[tuple[int, int]]] = {}
    degraded = Corpus(documents=list(full.documents))
    for doc_id, entity in full.examples:
        truth[(doc_id, entity.entity_id)] = {(m.start, m.end) for m in entity.mentions}
        first = entity.mentions[0]
        degraded.examples.append(
            (
                doc_id,
                EntityRecord(
                    entity_id=entity.entity_id,
                    name=entity.name,
                    mentions=[Mention(first.start, first.end, first.surface, Provenance.GOLD)],
                    label=entity.label,
                ),
            )
        )
    return degraded, truth
