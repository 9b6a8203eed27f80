"""Command-line surface tying the pipeline together.

Commands: ingest, enrich, split, train, predict, evaluate, sweep-frequency,
prompt, report, synth. Every command writes a replay manifest (command,
resolved config + hash, seed, input fingerprints) next to its primary output.

Config precedence for training: CLI flags > --config file > defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from salience import synthetic
from salience.baselines.features import extract_features
from salience.baselines.gbdt import GBDTParams, load_gbdt, predict_gbdt, save_gbdt, train_gbdt
from salience.baselines.heuristics import sweep_frequency_threshold, write_sweep_csv
from salience.corpus.loaders import load_corpus, save_normalized
from salience.corpus.model import corpus_stats
from salience.corpus.splits import temporal_split
from salience.cross_encoder.tokenizer import HashingTokenizer
from salience.cross_encoder.training import (
    LR_GRID,
    TrainConfig,
    load_checkpoint,
    predict_corpus,
    save_checkpoint,
    train,
)
from salience.enrichment.pipeline import enrich_corpus
from salience.enrichment.recognizers import get_recognizer
from salience.errors import (
    ConfigError,
    EmptyDocument,
    EmptyEntityName,
    EmptyTrainingSet,
    EntityNameLongerThanBudget,
    MalformedRecord,
    MissingTimestamp,
    NonFiniteLoss,
    NoSeedMention,
    OutOfRangeLabel,
    OutOfRangeScore,
    SalienceError,
    SingleClassTrainSet,
    UnknownFormat,
)
from salience.evaluation.records import build_records
from salience.evaluation.report import ReportFormat, emit_report
from salience.evaluation.stratify import build_eval_report
from salience.manifest import manifest_path_for, write_run_manifest
from salience.zeroshot.adapters import get_adapter
from salience.zeroshot.harness import (
    DEFAULT_BUDGET_TOKENS,
    prediction_pairs,
    run_prompting,
    write_prompt_records,
)
from salience.zeroshot.templates import GenerationParams, load_template

# Exit codes by failure class.
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_TRAINING = 4

_DATA_ERRORS = (
    MalformedRecord,
    UnknownFormat,
    MissingTimestamp,
    NoSeedMention,
    OutOfRangeLabel,
    OutOfRangeScore,
    FileNotFoundError,
)
_TRAINING_ERRORS = (
    EmptyTrainingSet,
    SingleClassTrainSet,
    NonFiniteLoss,
    EmptyEntityName,
    EmptyDocument,
    EntityNameLongerThanBudget,
)


def _write_jsonl(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True))
            fh.write("\n")


def _read_jsonl(path: str | Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


# --- commands -----------------------------------------------------------------

def cmd_ingest(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.input, args.format)
    save_normalized(corpus, args.out)
    stats = corpus_stats(corpus)
    write_run_manifest(
        manifest_path_for(args.out),
        "ingest",
        {"format": args.format, "input": str(args.input), "out": str(args.out)},
        None,
        [args.input],
    )
    print(
        f"ingested {stats.n_documents} docs, {stats.n_examples} examples, "
        f"{stats.n_mentions} mentions, {stats.salient_fraction:.1%} salient -> {args.out}"
    )
    return 0


def cmd_enrich(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    recognizer = get_recognizer(args.recognizer)
    enriched = enrich_corpus(corpus, recognizer)
    save_normalized(enriched, args.out)
    stats = corpus_stats(enriched)
    write_run_manifest(
        manifest_path_for(args.out),
        "enrich",
        {"recognizer": args.recognizer, "corpus": str(args.corpus), "out": str(args.out)},
        None,
        [args.corpus],
    )
    print(f"enriched -> {stats.n_mentions} mentions across {stats.n_examples} examples")
    return 0


def cmd_split(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    try:
        ratios = tuple(float(x) for x in args.ratios.split(","))
    except ValueError:
        raise ConfigError(f"--ratios must be three comma-separated numbers, got {args.ratios!r}")
    if len(ratios) != 3:
        raise ConfigError(f"--ratios must have three parts, got {args.ratios!r}")
    parts = temporal_split(corpus, ratios)  # type: ignore[arg-type]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = ("train.jsonl", "val.jsonl", "test.jsonl")
    for part, name in zip(parts, names):
        save_normalized(part, out_dir / name)
    write_run_manifest(
        out_dir / "split.manifest.json",
        "split",
        {"ratios": list(ratios), "corpus": str(args.corpus), "out_dir": str(out_dir)},
        None,
        [args.corpus],
    )
    counts = [len(p.examples) for p in parts]
    doc_counts = [len(p.documents) for p in parts]
    print(
        f"split docs {doc_counts[0]}/{doc_counts[1]}/{doc_counts[2]}, "
        f"examples {counts[0]}/{counts[1]}/{counts[2]} -> {out_dir}"
    )
    return 0


def _resolve_train_config(args: argparse.Namespace) -> TrainConfig:
    resolved: dict = {}
    if args.config:
        resolved.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    overrides = {
        "model_type": args.model.replace("-", "_") if args.model else None,
        "mode": args.mode,
        "use_position_embeddings": (
            {"on": True, "off": False}[args.position_embeddings]
            if args.position_embeddings
            else None
        ),
        "max_len": args.max_len,
        "seed": args.seed,
        "max_epochs": args.max_epochs,
        "patience": args.patience,
        "batch_size": args.batch_size,
        "d_model": args.d_model,
        "n_layers": args.n_layers,
        "threshold": args.threshold,
    }
    if args.lr:
        overrides["lr_grid"] = tuple(float(x) for x in args.lr.split(","))
    resolved.update({k: v for k, v in overrides.items() if v is not None})
    if "lr_grid" in resolved:
        resolved["lr_grid"] = tuple(resolved["lr_grid"])
    try:
        return TrainConfig(**resolved)
    except TypeError as exc:
        raise ConfigError(f"bad training config: {exc}")


def cmd_train(args: argparse.Namespace) -> int:
    train_corpus = load_corpus(args.train)
    val_corpus = load_corpus(args.val)
    out_dir = Path(args.out)

    if args.model == "gbdt":
        seed = args.seed if args.seed is not None else 13
        params = GBDTParams(seed=seed)
        examples = [
            (extract_features(doc, e), e.label) for doc, e in train_corpus.iter_examples()
        ]
        model = train_gbdt(examples, params)
        out_dir.mkdir(parents=True, exist_ok=True)
        save_gbdt(model, out_dir / "gbdt.json")
        write_run_manifest(
            out_dir / "train.manifest.json",
            "train",
            {
                "model": "gbdt",
                "train": str(args.train),
                "val": str(args.val),
                "n_rounds": params.n_rounds,
                "learning_rate": params.learning_rate,
            },
            seed,
            [args.train, args.val],
        )
        print(f"trained gbdt on {len(examples)} examples -> {out_dir / 'gbdt.json'}")
        return 0

    config = _resolve_train_config(args)
    result = train(train_corpus, val_corpus, config)
    save_checkpoint(result, out_dir)
    from dataclasses import asdict

    write_run_manifest(
        out_dir / "train.manifest.json",
        "train",
        {"train": str(args.train), "val": str(args.val), **asdict(config)},
        config.seed,
        [args.train, args.val],
    )
    m = result.val_metrics
    print(
        f"best lr {result.best_lr}: val P {m.precision:.3f} R {m.recall:.3f} F1 {m.f1:.3f} "
        f"-> {out_dir}"
    )
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    ckpt = Path(args.checkpoint)
    model_id = args.model_id
    if ckpt.is_dir() and (ckpt / "gbdt.json").exists():
        model = load_gbdt(ckpt / "gbdt.json")
        threshold = args.threshold if args.threshold is not None else 0.5
        rows = []
        for doc, e in corpus.iter_examples():
            score = predict_gbdt(model, extract_features(doc, e))
            rows.append(
                {
                    "doc_id": doc.doc_id,
                    "entity_id": e.entity_id,
                    "model_id": model_id or "gbdt",
                    "score": score,
                    "label_pred": int(score >= threshold),
                    "flag": None,
                }
            )
    else:
        model, config = load_checkpoint(ckpt)
        rows = predict_corpus(model, config, corpus, model_id or config.model_type)
    _write_jsonl(rows, args.out)
    write_run_manifest(
        manifest_path_for(args.out),
        "predict",
        {"checkpoint": str(ckpt), "corpus": str(args.corpus), "out": str(args.out)},
        None,
        [args.corpus],
    )
    print(f"wrote {len(rows)} predictions -> {args.out}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.gold)
    preds = _read_jsonl(args.preds)
    tokenizer = HashingTokenizer()
    records = build_records(corpus, preds, args.model_id or "model", tokenizer, args.max_len)
    report = build_eval_report(records, model_id=args.model_id)
    emit_report(report, ReportFormat.JSON, args.out)
    if args.csv:
        emit_report(report, ReportFormat.CSV, args.csv)
    if args.markdown:
        emit_report(report, ReportFormat.MARKDOWN, args.markdown)
    write_run_manifest(
        manifest_path_for(args.out),
        "evaluate",
        {"preds": str(args.preds), "gold": str(args.gold), "max_len": args.max_len},
        None,
        [args.preds, args.gold],
    )
    m = report.overall
    print(f"P {m.precision:.4f} R {m.recall:.4f} F1 {m.f1:.4f} on {report.total} examples")
    return 0


def cmd_sweep_frequency(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    rows = sweep_frequency_threshold(corpus, range(args.min, args.max + 1))
    write_sweep_csv(rows, args.out)
    write_run_manifest(
        manifest_path_for(args.out),
        "sweep-frequency",
        {"corpus": str(args.corpus), "min": args.min, "max": args.max},
        None,
        [args.corpus],
    )
    best = next(r for r in rows if r.is_best)
    print(f"best threshold {best.threshold}: P {best.precision:.3f} R {best.recall:.3f} F1 {best.f1:.3f}")
    return 0


def cmd_prompt(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.corpus)
    template = load_template(args.template)
    adapter = get_adapter(args.adapter)
    records = run_prompting(
        corpus, template, adapter, GenerationParams(), budget_tokens=args.budget
    )
    write_prompt_records(records, args.out)
    pairs, n_abstain = prediction_pairs(records, corpus)
    from salience.evaluation.metrics import prf1_from_predictions

    m = prf1_from_predictions(pairs)
    if args.report:
        preds = [
            {
                "doc_id": r.doc_id,
                "entity_id": r.entity_id,
                "label_pred": 0 if r.parsed_label == "ABSTAIN" else int(r.parsed_label),
                "score": None,
            }
            for r in records
        ]
        eval_records = build_records(corpus, preds, adapter.name, HashingTokenizer(), args.max_len)
        report = build_eval_report(eval_records, model_id=adapter.name, abstain_count=n_abstain)
        emit_report(report, ReportFormat.JSON, args.report)
    write_run_manifest(
        manifest_path_for(args.out),
        "prompt",
        {
            "corpus": str(args.corpus),
            "template": args.template,
            "adapter": args.adapter,
            "budget": args.budget,
        },
        None,
        [args.corpus],
    )
    print(
        f"P {m.precision * 100:.1f} R {m.recall * 100:.1f} F1 {m.f1 * 100:.1f} "
        f"abstain {n_abstain} on {len(records)} examples"
    )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    payload = json.loads(Path(args.report).read_text(encoding="utf-8"))
    # Re-render from the JSON payload without recomputing.
    from salience.evaluation.metrics import PRF1, ConfusionCounts
    from salience.evaluation.stratify import BucketMetrics, EvalReport

    def bucket(obj: dict) -> BucketMetrics:
        return BucketMetrics(
            support=obj["support"],
            counts=ConfusionCounts(obj["tp"], obj["fp"], obj["fn"], obj["tn"]),
            metrics=PRF1(obj["precision"], obj["recall"], obj["f1"], tuple(obj["undefined"])),
        )

    report = EvalReport(
        model_id=payload["model_id"],
        total=payload["total"],
        overall_counts=ConfusionCounts(
            payload["overall"]["tp"],
            payload["overall"]["fp"],
            payload["overall"]["fn"],
            payload["overall"]["tn"],
        ),
        overall=PRF1(
            payload["overall"]["precision"],
            payload["overall"]["recall"],
            payload["overall"]["f1"],
            tuple(payload["overall"]["undefined"]),
        ),
        by_position={k: bucket(v) for k, v in payload["by_position"].items()},
        by_frequency={k: bucket(v) for k, v in payload["by_frequency"].items()},
        abstain_count=payload.get("abstain_count", 0),
        schema_version=payload.get("schema_version", 1),
    )
    emit_report(report, args.format, args.out)
    print(f"rendered {args.format} report -> {args.out}")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    if args.kind == "rule":
        corpus = synthetic.make_rule_corpus(args.docs, args.seed)
    elif args.kind == "late":
        corpus = synthetic.make_late_mention_corpus(args.docs, args.seed)
    elif args.kind == "enrichment":
        corpus, _ = synthetic.make_enrichment_fixture(args.docs, args.seed)
    else:
        raise ConfigError(f"unknown synthetic kind {args.kind!r}")
    save_normalized(corpus, args.out)
    write_run_manifest(
        manifest_path_for(args.out),
        "synth",
        {"kind": args.kind, "docs": args.docs, "out": str(args.out)},
        args.seed,
        [],
    )
    stats = corpus_stats(corpus)
    print(f"generated {stats.n_documents} docs / {stats.n_examples} examples -> {args.out}")
    return 0


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="salience", description="Entity salience detection pipeline"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="convert a dataset export to the normalized JSONL schema")
    p.add_argument("--input", required=True)
    p.add_argument("--format", required=True, choices=["NYT", "WN", "SEL", "ENTSUM", "NORMALIZED_JSONL"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("enrich", help="infer all entity mentions and offsets")
    p.add_argument("--corpus", required=True)
    p.add_argument("--recognizer", default="rule", choices=["rule", "none"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_enrich)

    p = sub.add_parser("split", help="temporal train/val/test split")
    p.add_argument("--corpus", required=True)
    p.add_argument("--ratios", default="0.8,0.1,0.1")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="train a salience model")
    p.add_argument("--train", required=True)
    p.add_argument("--val", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--model", default="cross-encoder", choices=["cross-encoder", "target-masking", "gbdt"])
    p.add_argument("--config", help="JSON config file; CLI flags override its keys")
    p.add_argument("--mode", choices=["all", "first"])
    p.add_argument("--position-embeddings", choices=["on", "off"])
    p.add_argument("--max-len", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-epochs", type=int)
    p.add_argument("--patience", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--d-model", type=int)
    p.add_argument("--n-layers", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--lr", help=f"comma-separated learning-rate grid (default {','.join(str(x) for x in LR_GRID)})")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score a corpus with a trained checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--model-id")
    p.add_argument("--threshold", type=float)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="positive-class P/R/F1 plus stratified report")
    p.add_argument("--preds", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--csv")
    p.add_argument("--markdown")
    p.add_argument("--model-id")
    p.add_argument("--max-len", type=int, default=512, help="window size for position stratification")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep-frequency", help="frequency-threshold sweep, CSV output")
    p.add_argument("--corpus", required=True)
    p.add_argument("--min", type=int, default=1)
    p.add_argument("--max", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep_frequency)

    p = sub.add_parser("prompt", help="zero-shot prompting run with an LLM adapter")
    p.add_argument("--corpus", required=True)
    p.add_argument("--template", default="flan_ul2", choices=["llama2_chat", "flan_ul2"])
    p.add_argument("--adapter", required=True, help="mock-yes | mock-no | keyword:<k>")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET_TOKENS)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="also write a stratified evaluation report")
    p.add_argument("--max-len", type=int, default=512)
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("report", help="re-render an evaluation report")
    p.add_argument("--report", required=True)
    p.add_argument("--format", default="markdown", choices=["json", "csv", "markdown"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--kind", default="rule", choices=["rule", "late", "enrichment"])
    p.add_argument("--docs", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _TRAINING_ERRORS as exc:
        print(f"run error: {exc}", file=sys.stderr)
        return EXIT_TRAINING
    except SalienceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
