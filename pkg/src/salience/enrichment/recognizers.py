"""Pluggable named-entity recognizer interface and the shipped rule-based one.

Production deployments can register an adapter around a statistical NER tagger;
the pipeline only depends on the ``RecognizerInterface`` contract. The shipped
``CapitalizedRunRecognizer`` is deterministic and dependency-free, which makes
it the test double and the default.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol

from salience.errors import ConfigError

_WORD = re.compile(r"\w+")

# Sentence-initial function words produce spurious single-token spans; keep the
# filter small and frozen so recognizer output stays reproducible.
_SKIP_SINGLE = frozenset(
    {
        "A", "An", "The", "This", "That", "These", "Those", "It", "He", "She",
        "They", "We", "I", "You", "And", "But", "Or", "If", "In", "On", "At",
        "By", "For", "To", "From", "As", "Of", "Is", "Are", "Was", "Were",
        "When", "While", "After", "Before", "With", "Its", "His", "Her",
    }
)


@dataclass(frozen=True)
class RecognizerSpan:
    start: int
    end: int
    surface: str
    ner_type: str


class RecognizerInterface(Protocol):
    def spans(self, body: str) -> list[RecognizerSpan]:
        """Return candidate entity spans for ``body``; read-only and thread-safe."""
        ...


class CapitalizedRunRecognizer:
    """Emit maximal runs of capitalized tokens as candidate spans.

    Tokens belong to the same run when each starts with an uppercase letter and
    they are separated by single spaces (a newline or punctuation breaks the
    run). Single-token runs consisting of common sentence-initial function
    words are dropped.
    """

    ner_type = "CAPSPAN"

    def spans(self, body: str) -> list[RecognizerSpan]:
        tokens = [(m.group(), m.start(), m.end()) for m in _WORD.finditer(body)]
        spans: list[RecognizerSpan] = []
        run: list[tuple[str, int, int]] = []

        def flush() -> None:
            if not run:
                return
            if len(run) == 1 and run[0][0] in _SKIP_SINGLE:
                run.clear()
                return
            start, end = run[0][1], run[-1][2]
            spans.append(RecognizerSpan(start, end, body[start:end], self.ner_type))
            run.clear()

        for text, start, end in tokens:
            capitalized = text[0].isupper()
            if not capitalized:
                flush()
                continue
            if run and not (start - run[-1][2] == 1 and body[run[-1][2]] == " "):
                flush()
            run.append((text, start, end))
        flush()
        return spans


def get_recognizer(name: str | None) -> RecognizerInterface | None:
    """Resolve a recognizer by config name; ``none`` disables recognition."""
    if name is None or name == "none":
        return None
    if name == "rule":
        return CapitalizedRunRecognizer()
    raise ConfigError(f"unknown recognizer {name!r}; expected 'rule' or 'none'")
