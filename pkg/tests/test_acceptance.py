"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with:  pytest tests/test_acceptance.py -v -s
"""

from __future__ import annotations

import csv
import random
import time
from contextlib import contextmanager

import pytest
import torch

from salience.baselines.features import extract_features
from salience.baselines.gbdt import GBDTParams, predict_gbdt, train_gbdt
from salience.baselines.heuristics import sweep_frequency_threshold
from salience.corpus.model import Mention, validate_corpus
from salience.corpus.splits import temporal_split
from salience.cross_encoder.deciles import decile_vector, decile_vector_from_starts
from salience.cross_encoder.model import bce_loss
from salience.cross_encoder.tokenizer import CLS
from salience.cross_encoder.training import LR_GRID, TrainConfig, build_scorer, train
from salience.enrichment.matching import match_surface
from salience.enrichment.pipeline import enrich_corpus
from salience.enrichment.recognizers import CapitalizedRunRecognizer
from salience.evaluation.metrics import (
    ConfusionCounts,
    prf1_from_predictions,
    prf1_positive,
)
from salience.evaluation.records import read_records
from salience.evaluation.stratify import build_eval_report
from salience.synthetic import (
    make_enrichment_fixture,
    make_late_mention_corpus,
    make_rule_corpus,
)
from salience.zeroshot.adapters import ConstantAnswerAdapter
from salience.zeroshot.harness import prediction_pairs, render_prompt, run_prompting
from salience.zeroshot.templates import TemplateId, load_template

from conftest import entity_with_spans, make_doc


@contextmanager
def criterion(number: int, name: str):
    started = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"\n[ACCEPTANCE {number}] {name}: FAIL")
        raise
    print(f"\n[ACCEPTANCE {number}] {name}: PASS ({time.monotonic() - started:.1f}s)")


# --- 1. decile oracle -----------------------------------------------------------

def test_criterion_1_decile_oracle():
    with criterion(1, "decile vector matches floor-division oracle"):
        started = time.monotonic()
        rng = random.Random(101)
        for _ in range(1000):
            body_len = rng.randint(1, 5000)
            starts = [rng.randrange(body_len) for _ in range(rng.randint(0, 20))]
            mentions = [Mention(s, s + 1, "x") for s in starts]
            expected = [0] * 10
            for s in starts:
                expected[10 * s // body_len] = 1
            got = decile_vector(body_len, mentions)
            assert list(got.slots) == expected
            assert all(v in (0, 1) for v in got.slots)
        worked = decile_vector_from_starts(100, [5, 12, 17, 44])
        assert worked.slots == (1, 1, 0, 0, 1, 0, 0, 0, 0, 0)
        assert time.monotonic() - started < 5.0


# --- 2. gradient check ------------------------------------------------------------

def test_criterion_2_gradient_check():
    with criterion(2, "analytic gradients match central differences (rel < 1e-4)"):
        started = time.monotonic()
        config = TrainConfig(
            d_model=16, n_heads=2, n_layers=1, vocab_size=128, max_len=24,
            use_position_embeddings=True,
        )
        points_checked = 0
        worst = 0.0
        for trial in range(10):
            torch.manual_seed(1000 + trial)
            model = build_scorer(config).double()
            rng = random.Random(2000 + trial)
            length = rng.randint(6, 20)
            token_ids = torch.tensor(
                [[CLS] + [rng.randrange(6, 128) for _ in range(length - 1)]], dtype=torch.long
            )
            padding = torch.ones_like(token_ids, dtype=torch.bool)
            deciles = torch.zeros(1, 10, dtype=torch.float64)
            for slot in rng.sample(range(10), rng.randint(1, 4)):
                deciles[0, slot] = 1.0
            label = torch.tensor([float(rng.randint(0, 1))], dtype=torch.float64)

            def loss_fn():
                return bce_loss(model(token_ids, padding, deciles), label).mean()

            model.zero_grad()
            loss_fn().backward()
            checkable = [
                (name, p)
                for name, p in model.named_parameters()
                if name.startswith("head.") or name.startswith("position_encoder.")
            ]
            coords = []
            for name, p in checkable:
                coords.extend((name, p, i) for i in range(p.numel()))
            rng.shuffle(coords)
            for name, p, idx in coords[:10]:
                flat = p.data.view(-1)
                orig = flat[idx].item()
                h = 1e-6 * max(1.0, abs(orig))
                flat[idx] = orig + h
                up = loss_fn().item()
                flat[idx] = orig - h
                down = loss_fn().item()
                flat[idx] = orig
                fd = (up - down) / (2 * h)
                an = p.grad.view(-1)[idx].item()
                if max(abs(fd), abs(an)) >= 1e-12:
                    rel = abs(fd - an) / max(abs(fd), abs(an))
                    assert rel < 1e-4, f"{name}[{idx}]: fd={fd} an={an} rel={rel}"
                    worst = max(worst, rel)
                points_checked += 1
        assert points_checked == 100
        assert time.monotonic() - started < 60.0
        print(f"  worst relative error {worst:.3e} over {points_checked} points", end="")


# --- 3. metric oracle --------------------------------------------------------------

def test_criterion_3_metric_oracle(fixtures_dir):
    with criterion(3, "P/R/F1 matches hand-scored oracle; pooling identity holds"):
        records = read_records(fixtures_dir / "prf1_records.jsonl")
        with open(fixtures_dir / "prf1_oracle.csv") as fh:
            oracle = next(csv.DictReader(fh))
        metrics = prf1_positive(records)
        assert abs(metrics.precision - float(oracle["precision"])) <= 1e-12
        assert abs(metrics.recall - float(oracle["recall"])) <= 1e-12
        assert abs(metrics.f1 - float(oracle["f1"])) <= 1e-12

        from test_evaluation import _random_records

        rng = random.Random(33)
        for _ in range(500):
            sample = _random_records(rng, rng.randint(0, 60))
            report = build_eval_report(sample, model_id="m")
            for buckets in (report.by_position, report.by_frequency):
                pooled = ConfusionCounts()
                for bucket in buckets.values():
                    pooled = pooled + bucket.counts
                assert pooled == report.overall_counts
                assert sum(b.support for b in buckets.values()) == report.total


# --- 4. synthetic end-to-end ----------------------------------------------------------

def test_criterion_4_synthetic_end_to_end():
    with criterion(4, "synthetic end-to-end: sweep, GBDT, cross-encoder, mode ordering"):
        started = time.monotonic()
        corpus = make_rule_corpus(500, seed=7)
        validate_corpus(corpus)
        train_c, val_c, test_c = temporal_split(corpus, (0.7, 0.15, 0.15))

        # Frequency sweep recovers the generating threshold exactly.
        rows = sweep_frequency_threshold(corpus, range(1, 9))
        best = next(r for r in rows if r.is_best)
        assert best.threshold == 3
        assert best.f1 == 1.0

        # Features & GBDT.
        examples = [(extract_features(d, e), e.label) for d, e in train_c.iter_examples()]
        model = train_gbdt(examples, GBDTParams())
        pairs = [
            (int(predict_gbdt(model, extract_features(d, e)) >= 0.5), e.label)
            for d, e in test_c.iter_examples()
        ]
        gbdt_f1 = prf1_from_predictions(pairs).f1
        assert gbdt_f1 >= 0.95

        # Cross-encoder over the full learning-rate grid.
        config = TrainConfig(
            d_model=32, n_heads=2, n_layers=1, vocab_size=4096, max_len=160,
            batch_size=32, max_epochs=10, patience=3, seed=13, lr_grid=LR_GRID,
        )
        result = train(train_c, val_c, config)
        assert result.val_metrics.f1 >= 0.90

        # Hiding non-first mentions must not help when salience hinges on them.
        late = make_late_mention_corpus(200, seed=11)
        ltrain, lval, _ = temporal_split(late, (0.7, 0.15, 0.15))
        shared = dict(
            d_model=32, n_heads=2, n_layers=1, vocab_size=4096, max_len=160,
            batch_size=32, max_epochs=10, patience=3, seed=13, lr_grid=(0.001,),
        )
        f1_all = train(ltrain, lval, TrainConfig(mode="all", **shared)).val_metrics.f1
        f1_first = train(ltrain, lval, TrainConfig(mode="first", **shared)).val_metrics.f1
        assert f1_first <= f1_all

        elapsed = time.monotonic() - started
        assert elapsed < 600.0
        print(
            f"  sweep best t=3 F1=1.0, gbdt F1 {gbdt_f1:.3f}, "
            f"cross-encoder F1 {result.val_metrics.f1:.3f} (lr {result.best_lr}), "
            f"first {f1_first:.3f} <= all {f1_all:.3f}, {elapsed:.0f}s",
            end="",
        )


# --- 5. prompting harness --------------------------------------------------------------

def test_criterion_5_prompting_harness():
    with criterion(5, "constant-Yes adapter: exact recall/precision; byte-stable prompts"):
        corpus = make_rule_corpus(50, seed=3)
        template = load_template(TemplateId.FLAN_UL2)
        adapter = ConstantAnswerAdapter("Yes")
        records = run_prompting(corpus, template, adapter)
        pairs, n_abstain = prediction_pairs(records, corpus)
        metrics = prf1_from_predictions(pairs)
        positive_rate = sum(g for _, g in pairs) / len(pairs)
        assert n_abstain == 0
        assert metrics.recall == 1.0
        assert metrics.precision == positive_rate

        # Untruncated renders are byte-identical to the stored template text
        # with the slots substituted.
        doc = make_doc("Short headline", "One small sentence.")
        entity = entity_with_spans(doc, "Short", [(0, 5)])
        for template_id in (TemplateId.FLAN_UL2, TemplateId.LLAMA2_CHAT):
            tpl = load_template(template_id)
            rendered = render_prompt(tpl, doc, entity, adapter.tokenizer)
            assert rendered.prompt == tpl.text.format(entity="Short", text=doc.body)

        # Truncated prompts respect the 2048-token budget of the adapter tokenizer.
        long_doc = make_doc("Long one", " ".join(f"w{i}" for i in range(10000)))
        long_entity = entity_with_spans(long_doc, "Long", [(0, 4)])
        rendered = render_prompt(template, long_doc, long_entity, adapter.tokenizer, 2048)
        assert rendered.truncated
        assert len(adapter.tokenizer.tokenize(rendered.prompt)) <= 2048


# --- 6. enrichment -----------------------------------------------------------------------

def test_criterion_6_enrichment():
    with criterion(6, "enrichment: exact offsets, recall >= 0.95, matcher oracle"):
        degraded, truth = make_enrichment_fixture(50, seed=23)
        enriched = enrich_corpus(degraded, CapitalizedRunRecognizer())
        docs = {d.doc_id: d for d in enriched.documents}
        recovered = 0
        total = 0
        for doc_id, entity in enriched.examples:
            body = docs[doc_id].body
            for m in entity.mentions:  # offset validity, checked exhaustively
                assert body[m.start : m.end] == m.surface
            spans = {(m.start, m.end) for m in entity.mentions}
            expected = truth[(doc_id, entity.entity_id)]
            recovered += len(spans & expected)
            total += len(expected)
        recall = recovered / total
        assert recall >= 0.95

        # Pattern matcher equals the brute-force scan oracle.
        def brute_force(body: str, surface: str) -> list[tuple[int, int]]:
            def boundary(i: int) -> bool:
                return i < 0 or i >= len(body) or not body[i].isalnum()

            hits, last_end = [], 0
            for i in range(len(body) - len(surface) + 1):
                if i >= last_end and body[i : i + len(surface)] == surface:
                    if boundary(i - 1) and boundary(i + len(surface)):
                        hits.append((i, i + len(surface)))
                        last_end = i + len(surface)
            return hits

        rng = random.Random(55)
        alphabet = "ab .x,"
        for _ in range(10000):
            body = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 50)))
            surface = "".join(rng.choice("ab") for _ in range(rng.randint(1, 4)))
            got = [(m.start, m.end) for m in match_surface(body, surface)]
            assert got == brute_force(body, surface)
        print(f"  mention recall {recall:.4f} ({recovered}/{total})", end="")


# --- 7. split integrity --------------------------------------------------------------------

def test_criterion_7_split_integrity(tiny_corpus):
    with criterion(7, "temporal splits: monotone, exact partition, deterministic"):
        for corpus, ratios in (
            (tiny_corpus, (0.4, 0.3, 0.3)),
            (make_rule_corpus(50, seed=5), (0.7, 0.15, 0.15)),
            (make_rule_corpus(11, seed=9), (0.8, 0.1, 0.1)),
        ):
            runs = [temporal_split(corpus, ratios) for _ in range(5)]
            for parts in runs:
                nonempty = [p for p in parts if p.documents]
                for earlier, later in zip(nonempty, nonempty[1:]):
                    assert max(d.published_at for d in earlier.documents) <= min(
                        d.published_at for d in later.documents
                    )
                full = {(doc_id, e.entity_id) for doc_id, e in corpus.examples}
                seen: set[tuple[str, str]] = set()
                for part in parts:
                    keys = {(doc_id, e.entity_id) for doc_id, e in part.examples}
                    assert not (keys & seen)
                    seen |= keys
                assert seen == full
            baseline = [[d.doc_id for d in part.documents] for part in runs[0]]
            for parts in runs[1:]:
                assert [[d.doc_id for d in part.documents] for part in parts] == baseline
