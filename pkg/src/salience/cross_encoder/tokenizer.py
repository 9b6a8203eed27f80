"""Deterministic word-level tokenizer with a hashed vocabulary.

The shipped tiny encoder does not depend on pretrained vocabularies, so token
ids come from a stable content hash (blake2b) into a fixed-size id space.
Pretrained-backbone adapters bring their own tokenizers; everything downstream
only relies on this interface: tokens with character offsets plus the special
token ids below.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

PAD, CLS, SEP, BEGIN_ENTITY, END_ENTITY, MASK = range(6)
N_SPECIAL = 6

SPECIAL_STRINGS = {
    PAD: "[PAD]",
    CLS: "[CLS]",
    SEP: "[SEP]",
    BEGIN_ENTITY: "[BEGIN_ENTITY]",
    END_ENTITY: "[END_ENTITY]",
    MASK: "[MASK]",
}

_TOKEN = re.compile(r"\w+|[^\w\s]")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


class HashingTokenizer:
    """Regex word/punctuation tokenizer with hashed ids.

    Ids are stable across processes and platforms; case is folded before
    hashing so "Musk" and "musk" share an id.
    """

    def __init__(self, vocab_size: int = 4096):
        if vocab_size <= N_SPECIAL:
            raise ValueError(f"vocab_size must exceed {N_SPECIAL}")
        self.vocab_size = vocab_size

    def tokenize(self, text: str) -> list[Token]:
        return [Token(m.group(), m.start(), m.end()) for m in _TOKEN.finditer(text)]

    def token_id(self, text: str) -> int:
        digest = hashlib.blake2b(text.lower().encode("utf-8"), digest_size=8).digest()
        return N_SPECIAL + int.from_bytes(digest, "big") % (self.vocab_size - N_SPECIAL)

    def encode(self, text: str) -> list[int]:
        return [self.token_id(t.text) for t in self.tokenize(text)]

    def count_tokens(self, text: str) -> int:
        return len(self.tokenize(text))
