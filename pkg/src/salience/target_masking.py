"""Target entity masking baseline.

Every mention of the target entity is replaced by a single mask-role token
(regardless of how many tokens the surface had); the score comes from mean
pooling the backbone states at the mask positions and passing the pooled
vector through a feed-forward head with a sigmoid.
"""

from __future__ import annotations

import torch
from torch import Tensor, nn

from salience.corpus.model import Document, EntityRecord
from salience.cross_encoder.inputs import EncoderInput, _token_range
from salience.cross_encoder.model import SalienceHead, SalienceScore
from salience.cross_encoder.tokenizer import (
    CLS,
    MASK,
    SEP,
    SPECIAL_STRINGS,
    HashingTokenizer,
)
from salience.errors import EmptyEntityName

NO_MENTION_FLAG = "no_mention_in_window"


def build_masked_input(
    doc: Document,
    entity: EntityRecord,
    tokenizer: HashingTokenizer,
    max_len: int = 512,
    mask_per_token: bool = False,
) -> tuple[EncoderInput, list[int]]:
    """Replace each mention with mask tokens and report their positions.

    Default is one mask token per mention; ``mask_per_token`` switches to one
    mask per original token of the mention. Mentions beyond the window are
    simply absent from ``mask_positions`` (which may then be empty).
    """
    if not entity.name.strip():
        raise EmptyEntityName(f"entity {entity.entity_id!r} has an empty name")

    name_tokens = tokenizer.tokenize(entity.name)
    out_ids = [CLS] + [tokenizer.token_id(t.text) for t in name_tokens] + [SEP]
    out_tokens = [SPECIAL_STRINGS[CLS]] + [t.text for t in name_tokens] + [SPECIAL_STRINGS[SEP]]
    if len(out_ids) > max_len:
        out_ids = out_ids[:max_len]
        out_tokens = out_tokens[:max_len]
    budget = max_len - len(out_ids)

    body_tokens = tokenizer.tokenize(doc.body)
    ranges = []
    for m in entity.mentions:
        rng = _token_range(body_tokens, m)
        if rng is not None:
            ranges.append(rng)
    ranges.sort()

    mask_positions: list[int] = []
    emitted = 0
    i = 0
    ri = 0
    while i < len(body_tokens) and emitted < budget:
        while ri < len(ranges) and ranges[ri][0] < i:
            ri += 1
        if ri < len(ranges) and ranges[ri][0] == i:
            ts, te = ranges[ri]
            ri += 1
            n_masks = (te - ts) if mask_per_token else 1
            for _ in range(n_masks):
                if emitted >= budget:
                    break
                mask_positions.append(len(out_ids))
                out_ids.append(MASK)
                out_tokens.append(SPECIAL_STRINGS[MASK])
                emitted += 1
            i = te
            continue
        out_ids.append(tokenizer.token_id(body_tokens[i].text))
        out_tokens.append(body_tokens[i].text)
        emitted += 1
        i += 1

    return EncoderInput(token_ids=out_ids, tokens=out_tokens), mask_positions


class TargetMaskingScorer(nn.Module):
    """Mean-pooled mask representations through a sigmoid FFN head."""

    model_kind = "target_masking"

    def __init__(self, backbone: nn.Module, head_hidden: int | None = None):
        super().__init__()
        self.backbone = backbone
        d_model = backbone.d_model
        self.head = SalienceHead(d_model, head_hidden if head_hidden is not None else d_model)

    def forward(self, token_ids: Tensor, padding_mask: Tensor, mask_positions: Tensor) -> Tensor:
        """``mask_positions``: bool tensor [B, T], True at mask-token slots.

        Examples with zero mask positions pool to a zero vector.
        """
        hidden = self.backbone(token_ids, padding_mask)
        weights = mask_positions.to(hidden.dtype)
        counts = weights.sum(dim=-1, keepdim=True).clamp(min=1.0)
        pooled = (hidden * weights.unsqueeze(-1)).sum(dim=1) / counts
        return torch.sigmoid(self.head(pooled))


def masked_score(
    encoder_input: EncoderInput,
    mask_positions: list[int],
    backbone: nn.Module,
    head: SalienceHead,
    threshold: float = 0.5,
) -> SalienceScore:
    """Score one masked input; flags the prediction when no mask is in window."""
    device = next(head.parameters()).device
    token_ids = torch.tensor([encoder_input.token_ids], dtype=torch.long, device=device)
    padding = torch.ones_like(token_ids, dtype=torch.bool)
    positions = torch.zeros_like(token_ids, dtype=torch.bool)
    for p in mask_positions:
        positions[0, p] = True
    with torch.no_grad():
        hidden = backbone(token_ids, padding)
        weights = positions.to(hidden.dtype)
        counts = weights.sum(dim=-1, keepdim=True).clamp(min=1.0)
        pooled = (hidden * weights.unsqueeze(-1)).sum(dim=1) / counts
        value = torch.sigmoid(head(pooled))[0].item()
    flag = NO_MENTION_FLAG if not mask_positions else None
    return SalienceScore.from_value(value, threshold, flag=flag)
