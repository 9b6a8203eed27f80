"""Frozen regex sentence segmentation used by positional heuristics/features.

The splitter is deliberately simple and documented rather than faithful to any
particular NLP toolkit: a sentence ends at terminal punctuation followed by
whitespace, or at a newline. The inline headline (first line of the body) is
always its own sentence, index 0.
"""

from __future__ import annotations

import re
from bisect import bisect_right

from salience.corpus.model import Document

_BOUNDARY = re.compile(r"[.!?]+(?=\s)|\n")


def sentence_spans(doc: Document) -> list[tuple[int, int]]:
    """Character spans of sentences over ``body``, headline first.

    Spans exclude trailing whitespace but jointly cover every mention start:
    offsets are assigned to the closest preceding sentence start.
    """
    body = doc.body
    spans: list[tuple[int, int]] = []
    cursor = 0
    h_start, h_end = doc.headline_span
    if h_end > h_start:
        spans.append((h_start, h_end))
        cursor = h_end + 1  # skip the newline after the headline
    while cursor < len(body):
        match = _BOUNDARY.search(body, cursor)
        if match is None:
            spans.append((cursor, len(body)))
            break
        end = match.end() if match.group() != "\n" else match.start()
        if end > cursor:
            spans.append((cursor, end))
        cursor = match.end()
        while cursor < len(body) and body[cursor].isspace():
            cursor += 1
    return spans


def sentence_index_of(spans: list[tuple[int, int]], offset: int) -> int:
    """Index of the sentence containing ``offset`` (by sentence start)."""
    starts = [s for s, _ in spans]
    idx = bisect_right(starts, offset) - 1
    return max(idx, 0)


def first_sentence_boundary(doc: Document) -> int:
    """End of the first body sentence; mentions starting before it are 'in'."""
    spans = sentence_spans(doc)
    if len(spans) > 1:
        return spans[1][0]
    return len(doc.body)


def lead_sentence_index(doc: Document) -> int:
    """Sentence index of the lead sentence (the first one after the headline)."""
    h_start, h_end = doc.headline_span
    return 1 if h_end > h_start else 0
