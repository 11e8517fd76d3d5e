"""Unicode Script property lookup and majority-script voting."""

from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from typing import Optional

from ._script_table import INDEX, NAMES, STARTS, UNICODE_VERSION

__all__ = ["UNICODE_VERSION", "script_of", "script_majority", "NEUTRAL_SCRIPTS"]

NEUTRAL_SCRIPTS = frozenset({"Common", "Inherited", "Unknown"})


def script_of(ch: str) -> str:
    """Script property value name of a single character, e.g. ``"Cyrillic"``."""
    return NAMES[INDEX[bisect_right(STARTS, ord(ch)) - 1]]


def script_majority(text: str) -> Optional[str]:
    """Most frequent non-neutral script in ``text``; None if there is none.

    Ties go to the lexicographically smallest script name.
    """
    votes = Counter(script_of(ch) for ch in text)
    for name in NEUTRAL_SCRIPTS:
        votes.pop(name, None)
    if not votes:
        return None
    return min(votes.items(), key=lambda kv: (-kv[1], kv[0]))[0]
