"""Surface-string pattern matching over document bodies."""

from __future__ import annotations

from salience.corpus.model import Mention, Provenance


def _is_boundary(body: str, index: int) -> bool:
    """True when ``index`` sits at a token edge (string edge or non-alphanumeric)."""
    if index < 0 or index >= len(body):
        return True
    return not body[index].isalnum()


def match_surface(body: str, surface: str) -> list[Mention]:
    """Find all whole-token occurrences of ``surface`` in ``body``.

    Matches are case-sensitive, non-overlapping, and collected left-to-right
    greedily: after a match at ``[s, s+len)`` the scan resumes at ``s+len``.
    A candidate counts only when both edges touch a non-alphanumeric character
    or a string edge. Returns an empty list when the surface never occurs.
    """
    if not surface:
        return []
    matches: list[Mention] = []
    i = 0
    n = len(surface)
    while True:
        pos = body.find(surface, i)
        if pos < 0:
            break
        if _is_boundary(body, pos - 1) and _is_boundary(body, pos + n):
            matches.append(Mention(pos, pos + n, surface, Provenance.PATTERN_MATCHED))
            i = pos + n
        else:
            i = pos + 1
    return matches
