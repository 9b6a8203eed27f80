from __future__ import annotations

import json

import pytest

from salience.cli import main
from salience.corpus.loaders import load_corpus, save_normalized
from salience.synthetic import make_rule_corpus


@pytest.fixture(scope="module")
def corpus_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "corpus.jsonl"
    save_normalized(make_rule_corpus(30, seed=3), path)
    return path


def test_synth_and_ingest_round_trip(tmp_path, capsys):
    synth_out = tmp_path / "synth.jsonl"
    assert main(["synth", "--kind", "rule", "--docs", "10", "--seed", "5", "--out", str(synth_out)]) == 0
    norm_out = tmp_path / "norm.jsonl"
    assert main(["ingest", "--input", str(synth_out), "--format", "NORMALIZED_JSONL", "--out", str(norm_out)]) == 0
    out = capsys.readouterr().out
    assert "10 docs" in out
    assert (tmp_path / "norm.jsonl.manifest.json").exists()
    manifest = json.loads((tmp_path / "norm.jsonl.manifest.json").read_text())
    assert manifest["command"] == "ingest"
    assert manifest["inputs"][0]["sha256"]


def test_split_8_1_1(tmp_path, capsys):
    corpus = tmp_path / "ten.jsonl"
    save_normalized(make_rule_corpus(10, seed=4), corpus)
    out_dir = tmp_path / "splits"
    assert main(["split", "--corpus", str(corpus), "--ratios", "0.8,0.1,0.1", "--out-dir", str(out_dir)]) == 0
    assert "split docs 8/1/1" in capsys.readouterr().out
    assert load_corpus(out_dir / "train.jsonl").documents
    assert (out_dir / "split.manifest.json").exists()


def test_split_bad_ratios_exit_code(tmp_path, capsys):
    corpus = tmp_path / "c.jsonl"
    save_normalized(make_rule_corpus(4, seed=4), corpus)
    code = main(["split", "--corpus", str(corpus), "--ratios", "0.5,0.1,0.1", "--out-dir", str(tmp_path / "s")])
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_missing_file_exit_code(tmp_path, capsys):
    code = main(["ingest", "--input", str(tmp_path / "nope.jsonl"), "--format", "NYT", "--out", str(tmp_path / "o")])
    assert code == 3


def test_sweep_frequency(corpus_file, tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep-frequency", "--corpus", str(corpus_file), "--min", "1", "--max", "6", "--out", str(out)]) == 0
    assert "best threshold 3" in capsys.readouterr().out
    assert out.read_text().splitlines()[0] == "threshold,precision,recall,f1"


def test_enrich_command(tmp_path, capsys):
    src = tmp_path / "seed.jsonl"
    from salience.synthetic import make_enrichment_fixture

    degraded, _ = make_enrichment_fixture(6, seed=9)
    save_normalized(degraded, src)
    out = tmp_path / "enriched.jsonl"
    assert main(["enrich", "--corpus", str(src), "--recognizer", "rule", "--out", str(out)]) == 0
    enriched = load_corpus(out)
    assert sum(len(e.mentions) for _, e in enriched.examples) > len(enriched.examples)


def test_train_predict_evaluate_prompt_report(corpus_file, tmp_path, capsys):
    splits = tmp_path / "splits"
    assert main(["split", "--corpus", str(corpus_file), "--ratios", "0.7,0.15,0.15", "--out-dir", str(splits)]) == 0

    ckpt = tmp_path / "ckpt"
    assert main([
        "train",
        "--train", str(splits / "train.jsonl"),
        "--val", str(splits / "val.jsonl"),
        "--out", str(ckpt),
        "--model", "cross-encoder",
        "--position-embeddings", "on",
        "--mode", "all",
        "--max-len", "96",
        "--d-model", "16",
        "--max-epochs", "1",
        "--seed", "3",
        "--lr", "0.001",
    ]) == 0
    assert (ckpt / "params.pt").exists()
    assert (ckpt / "manifest.json").exists()
    assert (ckpt / "train_log.jsonl").exists()
    manifest = json.loads((ckpt / "train.manifest.json").read_text())
    assert manifest["seed"] == 3

    preds = tmp_path / "preds.jsonl"
    assert main(["predict", "--checkpoint", str(ckpt), "--corpus", str(splits / "test.jsonl"), "--out", str(preds)]) == 0

    report = tmp_path / "report.json"
    md = tmp_path / "report.md"
    assert main([
        "evaluate", "--preds", str(preds), "--gold", str(splits / "test.jsonl"),
        "--out", str(report), "--markdown", str(md), "--max-len", "96",
    ]) == 0
    payload = json.loads(report.read_text())
    assert payload["total"] == len(load_corpus(splits / "test.jsonl").examples)
    assert md.read_text().startswith("# Evaluation report")

    rendered = tmp_path / "again.csv"
    assert main(["report", "--report", str(report), "--format", "csv", "--out", str(rendered)]) == 0
    assert rendered.read_text().splitlines()[0] == "facet,bucket,support,precision,recall,f1"


def test_train_gbdt_and_predict(corpus_file, tmp_path, capsys):
    splits = tmp_path / "splits"
    assert main(["split", "--corpus", str(corpus_file), "--ratios", "0.7,0.15,0.15", "--out-dir", str(splits)]) == 0
    ckpt = tmp_path / "gbdt-ckpt"
    assert main([
        "train", "--model", "gbdt",
        "--train", str(splits / "train.jsonl"), "--val", str(splits / "val.jsonl"),
        "--out", str(ckpt),
    ]) == 0
    preds = tmp_path / "gbdt-preds.jsonl"
    assert main(["predict", "--checkpoint", str(ckpt), "--corpus", str(splits / "test.jsonl"), "--out", str(preds)]) == 0
    rows = [json.loads(line) for line in preds.read_text().splitlines()]
    assert all(0.0 <= row["score"] <= 1.0 for row in rows)


def test_evaluate_matches_hand_scored_oracle(tmp_path, fixtures_dir, capsys):
    # Rebuild the hand-scored fixture as a gold corpus + prediction file and
    # push it through the CLI; overall metrics must equal the committed oracle.
    import csv
    from datetime import datetime, timezone

    from salience.corpus.model import Corpus, Document, EntityRecord, Mention, SourceDataset
    from salience.evaluation.records import read_records

    records = read_records(fixtures_dir / "prf1_records.jsonl")
    names = [f"Entity{i:02d}" for i in range(len(records))]
    body = "headline line\n" + " ".join(f"{name} acted." for name in names)
    doc = Document(
        doc_id="oracle-doc",
        headline="headline line",
        body=body,
        published_at=datetime(2020, 1, 1, tzinfo=timezone.utc),
        source_dataset=SourceDataset.SYNTHETIC,
    )
    corpus = Corpus(documents=[doc])
    preds = []
    for record, name in zip(records, names):
        start = body.index(name)
        corpus.examples.append(
            (
                doc.doc_id,
                EntityRecord(
                    entity_id=record.entity_id,
                    name=name,
                    mentions=[Mention(start, start + len(name), name)],
                    label=record.label_gold,
                ),
            )
        )
        preds.append(
            {"doc_id": doc.doc_id, "entity_id": record.entity_id, "label_pred": record.label_pred}
        )

    gold_path = tmp_path / "gold.jsonl"
    save_normalized(corpus, gold_path)
    preds_path = tmp_path / "preds.jsonl"
    preds_path.write_text("\n".join(json.dumps(p) for p in preds) + "\n")
    report_path = tmp_path / "report.json"
    assert main([
        "evaluate", "--preds", str(preds_path), "--gold", str(gold_path), "--out", str(report_path),
    ]) == 0
    payload = json.loads(report_path.read_text())
    with open(fixtures_dir / "prf1_oracle.csv") as fh:
        oracle = next(csv.DictReader(fh))
    assert abs(payload["overall"]["precision"] - float(oracle["precision"])) <= 1e-12
    assert abs(payload["overall"]["recall"] - float(oracle["recall"])) <= 1e-12
    assert abs(payload["overall"]["f1"] - float(oracle["f1"])) <= 1e-12


def test_prompt_mock_yes_reports_full_recall(corpus_file, tmp_path, capsys):
    gen = tmp_path / "gen.jsonl"
    report = tmp_path / "prompt-report.json"
    assert main([
        "prompt", "--corpus", str(corpus_file), "--adapter", "mock-yes",
        "--template", "flan_ul2", "--out", str(gen), "--report", str(report),
    ]) == 0
    out = capsys.readouterr().out
    assert "R 100.0" in out
    payload = json.loads(report.read_text())
    assert payload["overall"]["recall"] == 1.0
    assert payload["abstain_count"] == 0
