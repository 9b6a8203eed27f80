"""Label binarization for datasets shipping ordinal or averaged labels."""

from __future__ import annotations

from salience.errors import OutOfRangeLabel, OutOfRangeScore


def binarize_sel_label(rank: int) -> int:
    """Map a 4-class salience rank to a binary label.

    Bottom two classes (0, 1) map to not salient, top two (2, 3) to salient.
    """
    if rank not in (0, 1, 2, 3):
        raise OutOfRangeLabel(f"rank must be in {{0, 1, 2, 3}}, got {rank!r}")
    return 1 if rank >= 2 else 0


def binarize_entsum_score(mean_score: float) -> int:
    """Map a mean annotation score in [0, 3] to a binary label.

    Salient iff the mean is strictly greater than 1.5.
    """
    if not (0.0 <= mean_score <= 3.0):
        raise OutOfRangeScore(f"mean score must be in [0, 3], got {mean_score!r}")
    return 1 if mean_score > 1.5 else 0
