from __future__ import annotations

import json

import pytest

from salience.cross_encoder.tokenizer import HashingTokenizer
from salience.errors import ConfigError, EntityNameLongerThanBudget
from salience.evaluation.metrics import prf1_from_predictions
from salience.synthetic import make_rule_corpus
from salience.zeroshot.adapters import (
    ConstantAnswerAdapter,
    GenerationRequest,
    KeywordFrequencyAdapter,
    get_adapter,
)
from salience.zeroshot.harness import (
    ABSTAIN,
    parse_answer,
    prediction_pairs,
    render_prompt,
    run_prompting,
    write_prompt_records,
)
from salience.zeroshot.templates import GenerationParams, PromptTemplate, TemplateId, load_template

from conftest import entity_with_spans, make_doc


# --- templates -------------------------------------------------------------------

@pytest.mark.parametrize("template_id", [TemplateId.LLAMA2_CHAT, TemplateId.FLAN_UL2])
def test_templates_load_with_single_slots(template_id):
    template = load_template(template_id)
    assert template.text.count("{entity}") == 1
    assert template.text.count("{text}") == 1


def test_template_rejects_missing_slot():
    with pytest.raises(ConfigError):
        PromptTemplate(TemplateId.FLAN_UL2, "no slots at all")


def test_generation_params_frozen_defaults():
    params = GenerationParams()
    assert (params.top_k, params.top_p, params.temperature, params.max_new_tokens) == (0, 0.0, 0.0, 1)


# --- rendering -----------------------------------------------------------------------

def test_untruncated_render_is_template_with_slots_filled():
    template = load_template(TemplateId.FLAN_UL2)
    doc = make_doc("Short headline", "One short sentence.")
    entity = entity_with_spans(doc, "Short", [(0, 5)])
    rendered = render_prompt(template, doc, entity, HashingTokenizer(), budget_tokens=2048)
    assert not rendered.truncated
    assert rendered.prompt == template.text.format(entity="Short", text=doc.body)


def test_truncated_render_fits_budget_and_keeps_instruction():
    template = load_template(TemplateId.LLAMA2_CHAT)
    body = " ".join(f"w{i}" for i in range(6000))
    doc = make_doc("Long doc", body)
    entity = entity_with_spans(doc, "Long", [(0, 4)])
    tok = HashingTokenizer()
    rendered = render_prompt(template, doc, entity, tok, budget_tokens=2048)
    assert rendered.truncated
    assert len(tok.tokenize(rendered.prompt)) <= 2048
    # Instruction block and entity survive; only the document text shrinks.
    assert rendered.prompt.startswith("<s> [INST]")
    assert "[/INST]" in rendered.prompt
    assert "Is Entity: Long salient in Text:" in rendered.prompt
    assert doc.body.startswith(rendered.document_text)


def test_truncated_render_uses_maximal_prefix():
    template = load_template(TemplateId.FLAN_UL2)
    body = " ".join(f"w{i}" for i in range(500))
    doc = make_doc("Long doc", body)
    entity = entity_with_spans(doc, "Long", [(0, 4)])
    tok = HashingTokenizer()
    budget = 200
    rendered = render_prompt(template, doc, entity, tok, budget_tokens=budget)
    used = len(tok.tokenize(rendered.prompt))
    assert used <= budget
    # Adding one more body token would overflow.
    body_tokens = tok.tokenize(doc.body)
    kept = len(tok.tokenize(rendered.document_text))
    longer = doc.body[: body_tokens[kept].end]
    assert len(tok.tokenize(template.render(entity.name, longer))) > budget


def test_entity_longer_than_budget_rejected():
    template = load_template(TemplateId.FLAN_UL2)
    doc = make_doc("h", "tiny body.")
    entity = entity_with_spans(doc, "h", [(0, 1)])
    entity.name = " ".join(f"n{i}" for i in range(300))
    with pytest.raises(EntityNameLongerThanBudget):
        render_prompt(template, doc, entity, HashingTokenizer(), budget_tokens=64)


# --- answer parsing --------------------------------------------------------------------

@pytest.mark.parametrize(
    "generated,expected",
    [
        ("Yes", 1),
        ("no.", 0),
        ("  YES indeed", 1),
        ("No way", 0),
        ("The entity is salient", ABSTAIN),
        ("", ABSTAIN),
        ("maybe", ABSTAIN),
    ],
)
def test_parse_answer(generated, expected):
    assert parse_answer(generated) == expected


# --- adapters + runs ----------------------------------------------------------------------

def test_adapter_registry():
    assert get_adapter("mock-yes").generate(GenerationRequest("p", "e", "t"), GenerationParams()) == "Yes"
    assert get_adapter("mock-no").name == "mock-no"
    assert get_adapter("keyword:3").min_count == 3
    with pytest.raises(ConfigError):
        get_adapter("gpt-x")


def test_keyword_adapter_counts_whole_tokens():
    adapter = KeywordFrequencyAdapter(min_count=2)
    params = GenerationParams()
    req = GenerationRequest("p", "Musk", "Musk met Musk Sr. near Muskrat hill")
    assert adapter.generate(req, params) == "Yes"
    req_one = GenerationRequest("p", "Musk", "Musk left early")
    assert adapter.generate(req_one, params) == "No"


def test_constant_yes_recall_is_exactly_one():
    corpus = make_rule_corpus(20, seed=3)
    template = load_template(TemplateId.FLAN_UL2)
    records = run_prompting(corpus, template, ConstantAnswerAdapter("Yes"))
    pairs, n_abstain = prediction_pairs(records, corpus)
    metrics = prf1_from_predictions(pairs)
    positives = sum(gold for _, gold in pairs)
    assert n_abstain == 0
    assert metrics.recall == 1.0
    assert metrics.precision == positives / len(pairs)


def test_parallel_prompting_matches_sequential():
    corpus = make_rule_corpus(6, seed=3)
    template = load_template(TemplateId.FLAN_UL2)
    adapter = get_adapter("keyword:2")
    sequential = run_prompting(corpus, template, adapter)
    parallel = run_prompting(corpus, template, adapter, max_in_flight=4)
    assert sequential == parallel


def test_prompt_records_serialize(tmp_path):
    corpus = make_rule_corpus(2, seed=3)
    template = load_template(TemplateId.LLAMA2_CHAT)
    records = run_prompting(corpus, template, ConstantAnswerAdapter("No"))
    out = tmp_path / "gen.jsonl"
    write_prompt_records(records, out)
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert set(rows[0]) == {"doc_id", "entity_id", "template_id", "raw_generation", "parsed_label"}
    assert all(row["parsed_label"] == 0 for row in rows)
    assert all(row["template_id"] == "llama2_chat" for row in rows)
