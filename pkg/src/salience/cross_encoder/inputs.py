"""Encoder input construction: entity name, separator, marked document body.

Layout: ``[CLS] <entity name> [SEP] <body with marker tokens>``, truncated at
``max_len`` tokens. Marker pairs are never split: a mention whose begin/end
markers cannot both fit inside the window contributes no markers at all (its
surface tokens still fill the window like ordinary text).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from salience.corpus.model import Document, EntityRecord, Mention
from salience.cross_encoder.tokenizer import (
    BEGIN_ENTITY,
    CLS,
    END_ENTITY,
    SEP,
    SPECIAL_STRINGS,
    HashingTokenizer,
    Token,
)
from salience.errors import EmptyEntityName


class InputMode(str, Enum):
    ALL_MENTIONS = "all"
    FIRST_MENTION_ONLY = "first"


@dataclass
class EncoderInput:
    token_ids: list[int]
    tokens: list[str]
    # (begin_marker_index, end_marker_index) per wrapped mention, in order.
    marker_spans: list[tuple[int, int]] = field(default_factory=list)
    cls_index: int = 0

    @property
    def wrapped_mention_count(self) -> int:
        return len(self.marker_spans)

    def __len__(self) -> int:
        return len(self.token_ids)


def _token_range(tokens: list[Token], mention: Mention) -> tuple[int, int] | None:
    """Half-open token index range covering the mention's characters."""
    start = None
    end = None
    for i, t in enumerate(tokens):
        if start is None and t.end > mention.start:
            start = i
        if t.start < mention.end:
            end = i + 1
        else:
            break
    if start is None or end is None or start >= end:
        return None
    return (start, end)


def build_input(
    doc: Document,
    entity: EntityRecord,
    tokenizer: HashingTokenizer,
    mode: InputMode = InputMode.ALL_MENTIONS,
    max_len: int = 512,
) -> EncoderInput:
    """Build the marked cross-encoder input for one (document, entity) pair.

    In ALL_MENTIONS mode every mention inside the window gets a marker pair;
    in FIRST_MENTION_ONLY only the earliest one does. Deterministic for fixed
    arguments. Raises EmptyEntityName when the entity name is blank.
    """
    if not entity.name.strip():
        raise EmptyEntityName(f"entity {entity.entity_id!r} has an empty name")

    name_tokens = tokenizer.tokenize(entity.name)
    out_ids = [CLS] + [tokenizer.token_id(t.text) for t in name_tokens] + [SEP]
    out_tokens = [SPECIAL_STRINGS[CLS]] + [t.text for t in name_tokens] + [SPECIAL_STRINGS[SEP]]
    if len(out_ids) > max_len:
        out_ids = out_ids[:max_len]
        out_tokens = out_tokens[:max_len]
    budget = max_len - len(out_ids)

    body_tokens = tokenizer.tokenize(doc.body)
    selected = entity.mentions if mode is InputMode.ALL_MENTIONS else entity.mentions[:1]
    ranges = []
    for m in selected:
        rng = _token_range(body_tokens, m)
        if rng is not None:
            ranges.append(rng)
    ranges.sort()

    marker_spans: list[tuple[int, int]] = []
    emitted = 0
    i = 0
    ri = 0
    while i < len(body_tokens) and emitted < budget:
        while ri < len(ranges) and ranges[ri][0] < i:
            ri += 1  # range swallowed by a previous wrap; dropped whole
        if ri < len(ranges) and ranges[ri][0] == i:
            ts, te = ranges[ri]
            ri += 1
            if emitted + (te - ts) + 2 <= budget:
                begin_index = len(out_ids)
                out_ids.append(BEGIN_ENTITY)
                out_tokens.append(SPECIAL_STRINGS[BEGIN_ENTITY])
                for t in body_tokens[ts:te]:
                    out_ids.append(tokenizer.token_id(t.text))
                    out_tokens.append(t.text)
                end_index = len(out_ids)
                out_ids.append(END_ENTITY)
                out_tokens.append(SPECIAL_STRINGS[END_ENTITY])
                marker_spans.append((begin_index, end_index))
                emitted += (te - ts) + 2
                i = te
                continue
            # Markers would straddle the truncation point: drop the pair and
            # let the surface tokens flow through the plain path below.
        out_ids.append(tokenizer.token_id(body_tokens[i].text))
        out_tokens.append(body_tokens[i].text)
        emitted += 1
        i += 1

    return EncoderInput(token_ids=out_ids, tokens=out_tokens, marker_spans=marker_spans)
