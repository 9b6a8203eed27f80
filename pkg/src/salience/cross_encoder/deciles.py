"""Decile position vectors: which tenths of the document mention the entity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from salience.corpus.model import Mention
from salience.errors import EmptyDocument

N_DECILES = 10


@dataclass(frozen=True)
class DecileVector:
    """10 binary slots; slot p is set when some mention starts in tenth p.

    Mention multiplicity within a tenth is deliberately not captured, so
    adding a mention to an already-active tenth leaves the vector unchanged.
    """

    slots: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.slots) != N_DECILES or any(s not in (0, 1) for s in self.slots):
            raise ValueError(f"slots must be 10 binary values, got {self.slots!r}")

    @property
    def active(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.slots) if s)

    @classmethod
    def zeros(cls) -> "DecileVector":
        return cls(slots=(0,) * N_DECILES)


def decile_index(start: int, body_len: int) -> int:
    """Tenth containing character offset ``start``: floor(10 * start / len)."""
    return start * N_DECILES // body_len


def decile_vector(body_len: int, mentions: Iterable[Mention]) -> DecileVector:
    """Binary decile indicator over mention start offsets.

    Offsets are character-based (tokenizer-independent); mention starts must
    lie within the body. Raises EmptyDocument when ``body_len`` is not positive.
    """
    if body_len <= 0:
        raise EmptyDocument(f"body_len must be positive, got {body_len}")
    slots = [0] * N_DECILES
    for m in mentions:
        if not (0 <= m.start < body_len):
            raise ValueError(f"mention start {m.start} outside body of length {body_len}")
        slots[decile_index(m.start, body_len)] = 1
    return DecileVector(slots=tuple(slots))


def decile_vector_from_starts(body_len: int, starts: Sequence[int]) -> DecileVector:
    """Same as decile_vector but from raw start offsets."""
    if body_len <= 0:
        raise EmptyDocument(f"body_len must be positive, got {body_len}")
    slots = [0] * N_DECILES
    for s in starts:
        slots[decile_index(s, body_len)] = 1
    return DecileVector(slots=tuple(slots))
