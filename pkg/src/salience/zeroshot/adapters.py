"""LLM adapter interface plus the shipped mock adapters.

An adapter turns a rendered prompt into a generated string and exposes the
tokenizer that measures the prompt budget. Live model adapters are optional
plugins; the mocks below make the harness testable without model weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

from salience.cross_encoder.tokenizer import HashingTokenizer, Token
from salience.enrichment.matching import match_surface
from salience.errors import ConfigError
from salience.zeroshot.templates import GenerationParams


class PromptTokenizer(Protocol):
    def tokenize(self, text: str) -> list[Token]: ...


@dataclass(frozen=True)
class GenerationRequest:
    """What the harness hands to an adapter for one example."""

    prompt: str
    entity_name: str
    document_text: str  # the possibly-truncated text that filled the slot


class LLMAdapter(Protocol):
    name: str
    tokenizer: PromptTokenizer

    def generate(self, request: GenerationRequest, params: GenerationParams) -> str: ...


class ConstantAnswerAdapter:
    """Always generates the same string; models degenerate LLM behavior."""

    def __init__(self, answer: str = "Yes"):
        self.answer = answer
        self.name = f"mock-{answer.lower()}"
        self.tokenizer = HashingTokenizer()

    def generate(self, request: GenerationRequest, params: GenerationParams) -> str:
        return self.answer


class KeywordFrequencyAdapter:
    """Answers Yes iff the entity name occurs at least ``min_count`` times in
    the truncated document text (whole-token matches)."""

    def __init__(self, min_count: int = 2):
        self.min_count = min_count
        self.name = f"keyword-{min_count}"
        self.tokenizer = HashingTokenizer()

    def generate(self, request: GenerationRequest, params: GenerationParams) -> str:
        hits = len(match_surface(request.document_text, request.entity_name))
        return "Yes" if hits >= self.min_count else "No"


def get_adapter(name: str) -> LLMAdapter:
    """Resolve an adapter by CLI name: mock-yes, mock-no, keyword:<k>."""
    if name == "mock-yes":
        return ConstantAnswerAdapter("Yes")
    if name == "mock-no":
        return ConstantAnswerAdapter("No")
    if name.startswith("keyword:"):
        try:
            return KeywordFrequencyAdapter(int(name.split(":", 1)[1]))
        except ValueError:
            raise ConfigError(f"bad keyword adapter spec {name!r}; use keyword:<int>")
    raise ConfigError(f"unknown adapter {name!r}; expected mock-yes, mock-no, or keyword:<k>")
