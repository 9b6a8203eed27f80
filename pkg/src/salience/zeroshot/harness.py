"""Zero-shot prompting harness: render, truncate, generate, parse."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from salience.corpus.model import Corpus, Document, EntityRecord
from salience.errors import EntityNameLongerThanBudget
from salience.zeroshot.adapters import GenerationRequest, LLMAdapter, PromptTokenizer
from salience.zeroshot.templates import GenerationParams, PromptTemplate

ABSTAIN = "ABSTAIN"

DEFAULT_BUDGET_TOKENS = 2048


@dataclass(frozen=True)
class RenderedPrompt:
    prompt: str
    document_text: str  # what actually filled the {text} slot
    truncated: bool


def render_prompt(
    template: PromptTemplate,
    doc: Document,
    entity: EntityRecord,
    tokenizer: PromptTokenizer,
    budget_tokens: int = DEFAULT_BUDGET_TOKENS,
) -> RenderedPrompt:
    """Fill the slots, shortening only the document text to honor the budget.

    The instruction block and the entity name are never truncated; if they
    alone exceed the budget, EntityNameLongerThanBudget is raised. Document
    truncation happens at token boundaries of the adapter's own tokenizer.
    """
    def total_tokens(text: str) -> int:
        return len(tokenizer.tokenize(template.render(entity.name, text)))

    if total_tokens("") > budget_tokens:
        raise EntityNameLongerThanBudget(
            f"prompt for entity {entity.entity_id!r} exceeds {budget_tokens} tokens with no text"
        )
    if total_tokens(doc.body) <= budget_tokens:
        return RenderedPrompt(template.render(entity.name, doc.body), doc.body, truncated=False)

    body_tokens = tokenizer.tokenize(doc.body)
    lo, hi = 0, len(body_tokens)  # number of kept body tokens
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if total_tokens(doc.body[: body_tokens[mid - 1].end]) <= budget_tokens:
            lo = mid
        else:
            hi = mid - 1
    text = doc.body[: body_tokens[lo - 1].end] if lo > 0 else ""
    return RenderedPrompt(template.render(entity.name, text), text, truncated=True)


def parse_answer(generated: str) -> int | str:
    """Map a generation to a binary label by case-insensitive prefix match.

    Anything that starts with neither yes nor no is ABSTAIN (scored as
    negative downstream, but counted separately).
    """
    normalized = generated.lstrip().lower()
    if normalized.startswith("yes"):
        return 1
    if normalized.startswith("no"):
        return 0
    return ABSTAIN


@dataclass(frozen=True)
class PromptRunRecord:
    doc_id: str
    entity_id: str
    template_id: str
    raw_generation: str
    parsed_label: int | str


def run_prompting(
    corpus: Corpus,
    template: PromptTemplate,
    adapter: LLMAdapter,
    params: GenerationParams = GenerationParams(),
    budget_tokens: int = DEFAULT_BUDGET_TOKENS,
    max_in_flight: int = 1,
) -> list[PromptRunRecord]:
    """Prompt the adapter for every example.

    Requests are independent; ``max_in_flight`` bounds concurrent generate
    calls (use >1 only with adapters declared safe for concurrent use).
    Output order always follows corpus order.
    """
    examples = corpus.iter_examples()
    requests = []
    for doc, entity in examples:
        rendered = render_prompt(template, doc, entity, adapter.tokenizer, budget_tokens)
        requests.append(GenerationRequest(rendered.prompt, entity.name, rendered.document_text))

    if max_in_flight > 1:
        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            generations = list(pool.map(lambda r: adapter.generate(r, params), requests))
    else:
        generations = [adapter.generate(r, params) for r in requests]

    return [
        PromptRunRecord(
            doc_id=doc.doc_id,
            entity_id=entity.entity_id,
            template_id=template.template_id.value,
            raw_generation=generated,
            parsed_label=parse_answer(generated),
        )
        for (doc, entity), generated in zip(examples, generations)
    ]


def prediction_pairs(records: list[PromptRunRecord], corpus: Corpus) -> tuple[list[tuple[int, int]], int]:
    """(predicted, gold) pairs with ABSTAIN mapped to 0, plus the abstain count."""
    gold = {(doc_id, e.entity_id): e.label for doc_id, e in corpus.examples}
    pairs = []
    n_abstain = 0
    for r in records:
        pred = r.parsed_label
        if pred == ABSTAIN:
            n_abstain += 1
            pred = 0
        pairs.append((pred, gold[(r.doc_id, r.entity_id)]))
    return pairs, n_abstain


def write_prompt_records(records: list[PromptRunRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(
                json.dumps(
                    {
                        "doc_id": r.doc_id,
                        "entity_id": r.entity_id,
                        "template_id": r.template_id,
                        "raw_generation": r.raw_generation,
                        "parsed_label": r.parsed_label,
                    },
                    sort_keys=True,
                )
            )
            fh.write("\n")
