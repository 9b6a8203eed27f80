"""Scoring model: backbone contract, position embeddings, sigmoid FFN head.

The backbone contract (``EncoderBackboneInterface``): a module mapping
``(token_ids[B, T], padding_mask[B, T]) -> hidden[B, T, d_model]`` with a
``d_model`` attribute, where ``padding_mask`` is True on real tokens. Output
length always equals input length; position 0 carries the pooled [CLS]-role
representation. Pretrained-transformer adapters satisfy the same contract;
the shipped ``TinyTransformerBackbone`` below is the trainable default.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import Tensor, nn

from salience.cross_encoder.deciles import N_DECILES, DecileVector
from salience.cross_encoder.inputs import EncoderInput

BCE_EPS = 1e-7


@dataclass(frozen=True)
class SalienceScore:
    """Real-valued salience plus its thresholded decision."""

    value: float
    decision: int
    flag: str | None = None

    @classmethod
    def from_value(cls, value: float, threshold: float = 0.5, flag: str | None = None) -> "SalienceScore":
        return cls(value=value, decision=int(value >= threshold), flag=flag)


class TinyTransformerBackbone(nn.Module):
    """Small trainable encoder: embeddings + learned positions + self-attention."""

    def __init__(
        self,
        vocab_size: int = 4096,
        d_model: int = 32,
        n_heads: int = 2,
        n_layers: int = 1,
        max_positions: int = 512,
        dropout: float = 0.0,
    ):
        super().__init__()
        self.d_model = d_model
        self.max_positions = max_positions
        self.token_embedding = nn.Embedding(vocab_size, d_model)
        self.position_embedding = nn.Embedding(max_positions, d_model)
        self.layers = nn.ModuleList(
            [_EncoderBlock(d_model, n_heads, dropout) for _ in range(n_layers)]
        )
        self.norm = nn.LayerNorm(d_model)

    def forward(self, token_ids: Tensor, padding_mask: Tensor) -> Tensor:
        if token_ids.size(1) > self.max_positions:
            raise ValueError(
                f"sequence length {token_ids.size(1)} exceeds max_positions {self.max_positions}"
            )
        positions = torch.arange(token_ids.size(1), device=token_ids.device)
        h = self.token_embedding(token_ids) + self.position_embedding(positions)
        for layer in self.layers:
            h = layer(h, padding_mask)
        return self.norm(h)


class _EncoderBlock(nn.Module):
    def __init__(self, d_model: int, n_heads: int, dropout: float):
        super().__init__()
        self.attention = nn.MultiheadAttention(d_model, n_heads, dropout=dropout, batch_first=True)
        self.norm1 = nn.LayerNorm(d_model)
        self.ff = nn.Sequential(
            nn.Linear(d_model, 4 * d_model),
            nn.GELU(),
            nn.Linear(4 * d_model, d_model),
        )
        self.norm2 = nn.LayerNorm(d_model)
        self.dropout = nn.Dropout(dropout)

    def forward(self, h: Tensor, padding_mask: Tensor) -> Tensor:
        attended, _ = self.attention(h, h, h, key_padding_mask=~padding_mask, need_weights=False)
        h = self.norm1(h + self.dropout(attended))
        return self.norm2(h + self.dropout(self.ff(h)))


class PositionEmbeddingTable(nn.Module):
    """Ten trainable rows, one per document tenth."""

    def __init__(self, d_pe: int):
        super().__init__()
        self.embedding = nn.Embedding(N_DECILES, d_pe)
        self.d_pe = d_pe

    @property
    def weight(self) -> Tensor:
        return self.embedding.weight

    def forward(self, deciles: Tensor) -> Tensor:
        """Mean of active rows per example; all-zero input yields a zero vector.

        ``deciles``: float tensor [B, 10] of 0/1 indicators.
        """
        sums = deciles @ self.embedding.weight
        counts = deciles.sum(dim=-1, keepdim=True).clamp(min=1.0)
        return sums / counts


class LinearPositionEncoder(nn.Module):
    """Alternative encoding: a learned linear map of the 10-dim indicator."""

    def __init__(self, d_pe: int):
        super().__init__()
        self.projection = nn.Linear(N_DECILES, d_pe, bias=False)
        self.d_pe = d_pe

    def forward(self, deciles: Tensor) -> Tensor:
        return self.projection(deciles)


class SalienceHead(nn.Module):
    """One-hidden-layer feed-forward network producing a salience logit."""

    def __init__(self, in_dim: int, hidden_dim: int):
        super().__init__()
        self.ff = nn.Sequential(nn.Linear(in_dim, hidden_dim), nn.ReLU(), nn.Linear(hidden_dim, 1))

    def forward(self, features: Tensor) -> Tensor:
        return self.ff(features).squeeze(-1)


class CrossEncoderScorer(nn.Module):
    """Backbone [CLS] state, optionally concatenated with the mean position
    embedding, mapped through the head to a score in (0, 1)."""

    model_kind = "cross_encoder"

    def __init__(
        self,
        backbone: nn.Module,
        use_position_embeddings: bool = False,
        d_pe: int | None = None,
        head_hidden: int | None = None,
        position_encoding: str = "mean",
    ):
        super().__init__()
        self.backbone = backbone
        self.use_position_embeddings = use_position_embeddings
        d_model = backbone.d_model
        d_pe = d_pe if d_pe is not None else d_model
        if use_position_embeddings:
            if position_encoding == "mean":
                self.position_encoder: nn.Module | None = PositionEmbeddingTable(d_pe)
            elif position_encoding == "linear":
                self.position_encoder = LinearPositionEncoder(d_pe)
            else:
                raise ValueError(f"unknown position encoding {position_encoding!r}")
            in_dim = d_model + d_pe
        else:
            self.position_encoder = None
            in_dim = d_model
        self.head = SalienceHead(in_dim, head_hidden if head_hidden is not None else d_model)

    def forward(self, token_ids: Tensor, padding_mask: Tensor, deciles: Tensor) -> Tensor:
        hidden = self.backbone(token_ids, padding_mask)
        features = hidden[:, 0, :]
        if self.position_encoder is not None:
            features = torch.cat([features, self.position_encoder(deciles)], dim=-1)
        return torch.sigmoid(self.head(features))


def bce_loss(psi: Tensor, label: Tensor) -> Tensor:
    """Binary cross entropy on scores, clamped at eps to stay finite."""
    psi = psi.clamp(BCE_EPS, 1.0 - BCE_EPS)
    label = label.to(psi.dtype)
    return -(label * torch.log(psi) + (1.0 - label) * torch.log(1.0 - psi))


def score(
    encoder_input: EncoderInput,
    deciles: DecileVector,
    backbone: nn.Module,
    position_table: PositionEmbeddingTable | None,
    head: SalienceHead,
    threshold: float = 0.5,
) -> SalienceScore:
    """Score a single prepared input with explicitly supplied modules.

    When ``position_table`` is None the head consumes the [CLS] state alone
    (the plain cross-encoder variant).
    """
    device = next(head.parameters()).device
    dtype = next(head.parameters()).dtype
    token_ids = torch.tensor([encoder_input.token_ids], dtype=torch.long, device=device)
    padding = torch.ones_like(token_ids, dtype=torch.bool)
    with torch.no_grad():
        hidden = backbone(token_ids, padding)
        features = hidden[:, 0, :]
        if position_table is not None:
            dv = torch.tensor([deciles.slots], dtype=dtype, device=device)
            features = torch.cat([features, position_table(dv)], dim=-1)
        value = torch.sigmoid(head(features))[0].item()
    return SalienceScore.from_value(value, threshold)
