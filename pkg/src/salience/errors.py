"""Exception hierarchy shared across the package.

Every error raised on a contract violation derives from :class:`SalienceError`
so callers (and the CLI) can map failure classes to exit codes.
"""

from __future__ import annotations


class SalienceError(Exception):
    """Base class for all package-specific errors."""


# --- corpus -----------------------------------------------------------------

class MalformedRecord(SalienceError):
    """A dataset record is missing fields or fails validation.

    Carries the offending line number and field name when known.
    """

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)


class UnknownFormat(SalienceError):
    """Requested dataset format is not one of the supported adapters."""


class OutOfRangeLabel(SalienceError):
    """A 4-class salience rank outside {0, 1, 2, 3}."""


class OutOfRangeScore(SalienceError):
    """A mean annotation score outside [0, 3]."""


class MissingTimestamp(SalienceError):
    """Documents lack publication timestamps required for a temporal split."""

    def __init__(self, doc_ids: list[str]):
        self.doc_ids = list(doc_ids)
        shown = ", ".join(self.doc_ids[:10])
        more = "" if len(self.doc_ids) <= 10 else f" (+{len(self.doc_ids) - 10} more)"
        super().__init__(f"documents without published_at: {shown}{more}")


# --- enrichment --------------------------------------------------------------

class NoSeedMention(SalienceError):
    """Entity has neither a gold mention nor any surface string to seed from."""


# --- baselines ---------------------------------------------------------------

class EmptyTrainingSet(SalienceError):
    """Training requested on zero examples."""


# --- encoder input construction ---------------------------------------------

class EmptyEntityName(SalienceError):
    """Entity name is empty; the encoder input cannot be built."""


class EmptyDocument(SalienceError):
    """Document body has zero length."""


# --- training ----------------------------------------------------------------

class SingleClassTrainSet(SalienceError):
    """Training set contains only one label class."""


class NonFiniteLoss(SalienceError):
    """Loss became NaN/Inf during training; aborted with diagnostics."""

    def __init__(self, message: str, *, lr: float, epoch: int, batch_index: int):
        self.lr = lr
        self.epoch = epoch
        self.batch_index = batch_index
        super().__init__(f"{message} (lr={lr}, epoch={epoch}, batch={batch_index})")


# --- prompting ----------------------------------------------------------------

class EntityNameLongerThanBudget(SalienceError):
    """Prompt cannot fit within the token budget even with an empty document."""


class ConfigError(SalienceError):
    """Invalid configuration value; message states the fix."""
