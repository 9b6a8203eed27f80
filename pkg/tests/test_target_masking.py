from __future__ import annotations

import pytest
import torch

from salience.cross_encoder.model import SalienceHead, TinyTransformerBackbone
from salience.cross_encoder.tokenizer import HashingTokenizer
from salience.target_masking import (
    NO_MENTION_FLAG,
    TargetMaskingScorer,
    build_masked_input,
    masked_score,
)

from conftest import entity_with_spans, make_doc


def test_masked_input_one_mask_per_mention(musk_doc, musk_entity):
    enc, positions = build_masked_input(musk_doc, musk_entity, HashingTokenizer(), 512)
    assert len(positions) == 2
    assert all(enc.tokens[p] == "[MASK]" for p in positions)


def test_masked_input_hides_all_mention_surfaces(musk_doc, musk_entity):
    enc, positions = build_masked_input(musk_doc, musk_entity, HashingTokenizer(), 512)
    body_tokens = enc.tokens[enc.tokens.index("[SEP]") + 1 :]
    assert "Musk" not in body_tokens
    assert "Elon" not in body_tokens
    assert body_tokens.count("[MASK]") == 2


def test_masked_input_mention_beyond_window_excluded():
    filler = " ".join(f"word{i}" for i in range(600))
    doc = make_doc("Quiet headline", filler + " Elon Musk appeared.")
    start = doc.body.index("Elon Musk")
    entity = entity_with_spans(doc, "Elon Musk", [(start, start + 9)])
    enc, positions = build_masked_input(doc, entity, HashingTokenizer(), 128)
    assert positions == []
    assert len(enc) <= 128


def test_masked_input_per_token_mode(musk_doc, musk_entity):
    _, per_mention = build_masked_input(musk_doc, musk_entity, HashingTokenizer(), 512)
    _, per_token = build_masked_input(
        musk_doc, musk_entity, HashingTokenizer(), 512, mask_per_token=True
    )
    # "Musk" -> 1 token, "Elon Musk" -> 2 tokens
    assert len(per_mention) == 2
    assert len(per_token) == 3


def _parts(seed=0, d_model=16):
    torch.manual_seed(seed)
    backbone = TinyTransformerBackbone(vocab_size=64, d_model=d_model, n_heads=2, n_layers=1, max_positions=32)
    head = SalienceHead(d_model, d_model)
    return backbone, head


def test_masked_score_zeroed_head_is_half(musk_doc, musk_entity):
    backbone, head = _parts()
    with torch.no_grad():
        for p in head.parameters():
            p.zero_()
    tok = HashingTokenizer(vocab_size=64)
    enc, positions = build_masked_input(musk_doc, musk_entity, tok, 32)
    result = masked_score(enc, positions, backbone, head)
    assert result.value == pytest.approx(0.5)


def test_masked_score_flags_empty_positions():
    backbone, head = _parts(seed=2)
    from salience.cross_encoder.inputs import EncoderInput

    enc = EncoderInput(token_ids=[1, 8, 2, 9], tokens=["[CLS]", "a", "[SEP]", "b"])
    result = masked_score(enc, [], backbone, head)
    assert result.flag == NO_MENTION_FLAG
    assert 0.0 < result.value < 1.0


def test_mask_pooling_is_permutation_invariant():
    backbone, head = _parts(seed=4)
    from salience.cross_encoder.inputs import EncoderInput

    enc = EncoderInput(
        token_ids=[1, 5, 2, 8, 5, 9, 5], tokens=["[CLS]", "[MASK]", "[SEP]", "x", "[MASK]", "y", "[MASK]"]
    )
    forward = masked_score(enc, [1, 4, 6], backbone, head).value
    backward = masked_score(enc, [6, 1, 4], backbone, head).value
    assert forward == pytest.approx(backward)


def test_target_masking_trains_through_shared_harness():
    from salience.corpus.splits import temporal_split
    from salience.cross_encoder.training import TrainConfig, train
    from salience.synthetic import make_rule_corpus

    corpus = make_rule_corpus(24, seed=41)
    tr, va, _ = temporal_split(corpus, (0.7, 0.15, 0.15))
    config = TrainConfig(
        model_type="target_masking", d_model=16, n_heads=2, n_layers=1,
        vocab_size=512, max_len=96, batch_size=16, max_epochs=2, patience=2,
        lr_grid=(0.001,), seed=9,
    )
    result = train(tr, va, config)
    assert result.model.model_kind == "target_masking"
    assert len(result.log) == 2
    assert 0.0 <= result.val_metrics.f1 <= 1.0


def test_mask_per_token_flag_flows_through_config():
    from salience.cross_encoder.training import TrainConfig, encode_corpus, make_tokenizer
    from salience.synthetic import make_rule_corpus

    corpus = make_rule_corpus(3, seed=2)
    base = TrainConfig(model_type="target_masking", max_len=160, vocab_size=512)
    per_token = TrainConfig(model_type="target_masking", max_len=160, vocab_size=512, mask_per_token=True)
    tok = make_tokenizer(base)
    n_base = sum(len(e.mask_positions) for e in encode_corpus(corpus, tok, base))
    n_per_token = sum(len(e.mask_positions) for e in encode_corpus(corpus, tok, per_token))
    assert n_per_token > n_base  # multi-token names expand under per-token masking


def test_masking_scorer_batches_with_and_without_masks():
    torch.manual_seed(6)
    backbone = TinyTransformerBackbone(vocab_size=64, d_model=16, n_heads=2, n_layers=1, max_positions=16)
    scorer = TargetMaskingScorer(backbone)
    token_ids = torch.tensor([[1, 8, 2, 5], [1, 9, 2, 10]])
    padding = torch.ones_like(token_ids, dtype=torch.bool)
    masks = torch.tensor([[False, False, False, True], [False, False, False, False]])
    out = scorer(token_ids, padding, masks)
    assert out.shape == (2,)
    assert ((out > 0) & (out < 1)).all()
