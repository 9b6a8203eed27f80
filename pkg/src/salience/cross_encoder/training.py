"""Seeded training loop: learning-rate grid, early stopping on validation F1.

Every run is replayable: one global seed drives parameter init, shuffling, and
dropout; the learning-rate sweep re-seeds before each run so all runs start
from the same initialization. The best checkpoint across the grid (by
validation F1, earlier grid entries winning ties) is returned together with a
per-epoch train log.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
import random
from bisect import bisect_right
from dataclasses import asdict, dataclass
from pathlib import Path

import torch
from torch import Tensor

from salience.corpus.model import Corpus
from salience.cross_encoder.deciles import N_DECILES, decile_vector, decile_vector_from_starts
from salience.cross_encoder.inputs import InputMode, build_input
from salience.cross_encoder.model import (
    CrossEncoderScorer,
    SalienceScore,
    TinyTransformerBackbone,
    bce_loss,
)
from salience.cross_encoder.tokenizer import PAD, HashingTokenizer
from salience.errors import (
    ConfigError,
    EmptyTrainingSet,
    NonFiniteLoss,
    SingleClassTrainSet,
)
from salience.evaluation.metrics import PRF1, prf1_from_predictions

# Learning-rate search grid used for all reported runs.
LR_GRID = (0.001, 0.0005, 0.0002, 0.0001, 0.00005)


@dataclass(frozen=True)
class TrainConfig:
    model_type: str = "cross_encoder"  # or "target_masking"
    mode: str = "all"  # marker mode: "all" | "first"
    use_position_embeddings: bool = False
    position_encoding: str = "mean"  # or "linear"
    mask_per_token: bool = False  # target_masking: one mask per original token
    decile_basis: str = "char"  # measure document tenths in "char" or "token" units
    d_model: int = 32
    n_heads: int = 2
    n_layers: int = 1
    d_pe: int | None = None
    head_hidden: int | None = None
    vocab_size: int = 4096
    max_len: int = 512
    dropout: float = 0.0
    lr_grid: tuple[float, ...] = LR_GRID
    max_epochs: int = 10
    patience: int = 3
    batch_size: int = 16
    weight_decay: float = 0.01
    seed: int = 13
    threshold: float = 0.5

    def validate(self) -> None:
        if self.model_type not in ("cross_encoder", "target_masking"):
            raise ConfigError(f"unknown model_type {self.model_type!r}")
        if self.mode not in ("all", "first"):
            raise ConfigError(f"mode must be 'all' or 'first', got {self.mode!r}")
        if self.decile_basis not in ("char", "token"):
            raise ConfigError(f"decile_basis must be 'char' or 'token', got {self.decile_basis!r}")
        if not self.lr_grid:
            raise ConfigError("lr_grid must contain at least one learning rate")
        if self.max_epochs < 0 or self.patience < 1 or self.batch_size < 1:
            raise ConfigError("max_epochs >= 0, patience >= 1, batch_size >= 1 required")


@dataclass(frozen=True)
class EncodedExample:
    doc_id: str
    entity_id: str
    token_ids: tuple[int, ...]
    deciles: tuple[int, ...]
    mask_positions: tuple[int, ...]
    label: int
    wrapped_mentions: int


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    lr: float
    train_loss: float
    val_p: float
    val_r: float
    val_f1: float


@dataclass
class TrainResult:
    model: torch.nn.Module
    config: TrainConfig
    best_lr: float
    val_metrics: PRF1
    log: list[EpochRecord]
    data_fingerprint: str


def make_tokenizer(config: TrainConfig) -> HashingTokenizer:
    return HashingTokenizer(vocab_size=config.vocab_size)


def _token_based_deciles(doc, mentions, tokenizer: HashingTokenizer):
    """Decile vector over token positions instead of character offsets."""
    body_tokens = tokenizer.tokenize(doc.body)
    if not body_tokens:
        return decile_vector_from_starts(1, [])
    starts = [t.start for t in body_tokens]
    indices = [max(bisect_right(starts, m.start) - 1, 0) for m in mentions]
    return decile_vector_from_starts(len(body_tokens), indices)


def encode_corpus(corpus: Corpus, tokenizer: HashingTokenizer, config: TrainConfig) -> list[EncodedExample]:
    """Precompute model inputs once; the epoch loop only shuffles indices."""
    mode = InputMode(config.mode)
    encoded = []
    for doc, entity in corpus.iter_examples():
        if config.decile_basis == "token":
            dv = _token_based_deciles(doc, entity.mentions, tokenizer)
        else:
            dv = decile_vector(len(doc.body), entity.mentions)
        if config.model_type == "target_masking":
            from salience.target_masking import build_masked_input

            enc, mask_positions = build_masked_input(
                doc, entity, tokenizer, config.max_len, mask_per_token=config.mask_per_token
            )
            wrapped = len(mask_positions)
        else:
            enc = build_input(doc, entity, tokenizer, mode, config.max_len)
            mask_positions = []
            wrapped = enc.wrapped_mention_count
        encoded.append(
            EncodedExample(
                doc_id=doc.doc_id,
                entity_id=entity.entity_id,
                token_ids=tuple(enc.token_ids),
                deciles=dv.slots,
                mask_positions=tuple(mask_positions),
                label=entity.label,
                wrapped_mentions=wrapped,
            )
        )
    return encoded


def collate(batch: list[EncodedExample], device: torch.device | None = None) -> dict[str, Tensor]:
    max_t = max(len(e.token_ids) for e in batch)
    token_ids = torch.full((len(batch), max_t), PAD, dtype=torch.long)
    padding = torch.zeros((len(batch), max_t), dtype=torch.bool)
    masks = torch.zeros((len(batch), max_t), dtype=torch.bool)
    deciles = torch.zeros((len(batch), N_DECILES), dtype=torch.float32)
    labels = torch.zeros(len(batch), dtype=torch.float32)
    for row, e in enumerate(batch):
        t = len(e.token_ids)
        token_ids[row, :t] = torch.tensor(e.token_ids, dtype=torch.long)
        padding[row, :t] = True
        for p in e.mask_positions:
            masks[row, p] = True
        deciles[row] = torch.tensor(e.deciles, dtype=torch.float32)
        labels[row] = float(e.label)
    out = {
        "token_ids": token_ids,
        "padding_mask": padding,
        "mask_positions": masks,
        "deciles": deciles,
        "labels": labels,
    }
    if device is not None:
        out = {k: v.to(device) for k, v in out.items()}
    return out


def build_scorer(config: TrainConfig) -> torch.nn.Module:
    backbone = TinyTransformerBackbone(
        vocab_size=config.vocab_size,
        d_model=config.d_model,
        n_heads=config.n_heads,
        n_layers=config.n_layers,
        max_positions=config.max_len,
        dropout=config.dropout,
    )
    if config.model_type == "target_masking":
        from salience.target_masking import TargetMaskingScorer

        return TargetMaskingScorer(backbone, head_hidden=config.head_hidden)
    return CrossEncoderScorer(
        backbone,
        use_position_embeddings=config.use_position_embeddings,
        d_pe=config.d_pe,
        head_hidden=config.head_hidden,
        position_encoding=config.position_encoding,
    )


def _forward(model: torch.nn.Module, batch: dict[str, Tensor]) -> Tensor:
    if getattr(model, "model_kind", "") == "target_masking":
        return model(batch["token_ids"], batch["padding_mask"], batch["mask_positions"])
    return model(batch["token_ids"], batch["padding_mask"], batch["deciles"])


def predict_scores(
    model: torch.nn.Module, examples: list[EncodedExample], batch_size: int = 64
) -> list[float]:
    model.eval()
    scores: list[float] = []
    with torch.no_grad():
        for i in range(0, len(examples), batch_size):
            batch = collate(examples[i : i + batch_size])
            scores.extend(_forward(model, batch).tolist())
    return scores


def evaluate_scorer(
    model: torch.nn.Module,
    examples: list[EncodedExample],
    threshold: float = 0.5,
    batch_size: int = 64,
) -> PRF1:
    scores = predict_scores(model, examples, batch_size)
    pairs = [(int(s >= threshold), e.label) for s, e in zip(scores, examples)]
    return prf1_from_predictions(pairs)


def data_fingerprint(*example_sets: list[EncodedExample]) -> str:
    h = hashlib.sha256()
    for examples in example_sets:
        for e in sorted(examples, key=lambda e: (e.doc_id, e.entity_id)):
            h.update(f"{e.doc_id}\t{e.entity_id}\t{e.label}\n".encode("utf-8"))
    return h.hexdigest()


def train(train_corpus: Corpus, val_corpus: Corpus, config: TrainConfig) -> TrainResult:
    """Sweep the learning-rate grid and return the best checkpoint by val F1.

    Raises SingleClassTrainSet unless both classes appear in the training set,
    and NonFiniteLoss (with lr/epoch/batch diagnostics) if the loss diverges.
    With max_epochs=0 the initialized model is returned and the log is empty.
    """
    config.validate()
    tokenizer = make_tokenizer(config)
    train_examples = encode_corpus(train_corpus, tokenizer, config)
    val_examples = encode_corpus(val_corpus, tokenizer, config)
    if not train_examples or not val_examples:
        raise EmptyTrainingSet("train and validation sets must both be non-empty")
    if len({e.label for e in train_examples}) < 2:
        raise SingleClassTrainSet("training set must contain both classes")

    log: list[EpochRecord] = []
    best_state: dict | None = None
    best_metrics: PRF1 | None = None
    best_lr = config.lr_grid[0]

    for lr in config.lr_grid:
        torch.manual_seed(config.seed)
        rng = random.Random(config.seed)
        model = build_scorer(config)
        optimizer = torch.optim.AdamW(model.parameters(), lr=lr, weight_decay=config.weight_decay)

        run_best_state = copy.deepcopy(model.state_dict())
        run_best_metrics = evaluate_scorer(model, val_examples, config.threshold)
        epochs_since_improvement = 0

        for epoch in range(1, config.max_epochs + 1):
            model.train()
            order = list(range(len(train_examples)))
            rng.shuffle(order)
            total_loss = 0.0
            n_batches = 0
            for start in range(0, len(order), config.batch_size):
                batch_examples = [train_examples[i] for i in order[start : start + config.batch_size]]
                batch = collate(batch_examples)
                optimizer.zero_grad()
                psi = _forward(model, batch)
                loss = bce_loss(psi, batch["labels"]).mean()
                if not math.isfinite(loss.item()):
                    raise NonFiniteLoss(
                        "training loss is not finite", lr=lr, epoch=epoch, batch_index=n_batches
                    )
                loss.backward()
                optimizer.step()
                total_loss += loss.item()
                n_batches += 1

            metrics = evaluate_scorer(model, val_examples, config.threshold)
            log.append(
                EpochRecord(
                    epoch=epoch,
                    lr=lr,
                    train_loss=total_loss / max(n_batches, 1),
                    val_p=metrics.precision,
                    val_r=metrics.recall,
                    val_f1=metrics.f1,
                )
            )
            if metrics.f1 > run_best_metrics.f1:
                run_best_metrics = metrics
                run_best_state = copy.deepcopy(model.state_dict())
                epochs_since_improvement = 0
            else:
                epochs_since_improvement += 1
                if epochs_since_improvement >= config.patience:
                    break

        if best_metrics is None or run_best_metrics.f1 > best_metrics.f1:
            best_metrics = run_best_metrics
            best_state = run_best_state
            best_lr = lr

    model = build_scorer(config)
    model.load_state_dict(best_state)
    model.eval()
    return TrainResult(
        model=model,
        config=config,
        best_lr=best_lr,
        val_metrics=best_metrics,
        log=log,
        data_fingerprint=data_fingerprint(train_examples, val_examples),
    )


# --- checkpoint + train log persistence ---------------------------------------

def write_train_log(log: list[EpochRecord], path: str | Path) -> None:
    """One JSON record per epoch: epoch, lr, train_loss, val_p, val_r, val_f1."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in log:
            fh.write(json.dumps(asdict(record), sort_keys=True))
            fh.write("\n")


def save_checkpoint(result: TrainResult, out_dir: str | Path) -> Path:
    """Checkpoint directory: parameter blob plus a JSON manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    torch.save({"state_dict": result.model.state_dict()}, out / "params.pt")
    manifest = {
        "format_version": 1,
        "config": asdict(result.config),
        "seed": result.config.seed,
        "best_lr": result.best_lr,
        "val_metrics": {
            "precision": result.val_metrics.precision,
            "recall": result.val_metrics.recall,
            "f1": result.val_metrics.f1,
        },
        "data_fingerprint": result.data_fingerprint,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8")
    write_train_log(result.log, out / "train_log.jsonl")
    return out


def load_checkpoint(ckpt_dir: str | Path) -> tuple[torch.nn.Module, TrainConfig]:
    ckpt = Path(ckpt_dir)
    manifest = json.loads((ckpt / "manifest.json").read_text(encoding="utf-8"))
    raw = dict(manifest["config"])
    raw["lr_grid"] = tuple(raw["lr_grid"])
    config = TrainConfig(**raw)
    model = build_scorer(config)
    blob = torch.load(ckpt / "params.pt", map_location="cpu", weights_only=True)
    model.load_state_dict(blob["state_dict"])
    model.eval()
    return model, config


def predict_corpus(
    model: torch.nn.Module, config: TrainConfig, corpus: Corpus, model_id: str
) -> list[dict]:
    """Score a corpus; one record per example with window/mask flags."""
    tokenizer = make_tokenizer(config)
    examples = encode_corpus(corpus, tokenizer, config)
    scores = predict_scores(model, examples)
    records = []
    for example, value in zip(examples, scores):
        s = SalienceScore.from_value(
            value,
            config.threshold,
            flag=None if example.wrapped_mentions else "no_mention_in_window",
        )
        records.append(
            {
                "doc_id": example.doc_id,
                "entity_id": example.entity_id,
                "model_id": model_id,
                "score": s.value,
                "label_pred": s.decision,
                "flag": s.flag,
            }
        )
    return records
