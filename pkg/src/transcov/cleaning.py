"""Per-cue relevance filters for noisy ASR transcripts."""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass
from typing import Optional

from .ingest import Cue


class DiscardReason(str, enum.Enum):
    TOO_SHORT = "too_short"
    TOO_BRIEF = "too_brief"
    JUNK_TEXT = "junk_text"


@dataclass(frozen=True)
class CleaningConfig:
    min_chars: int = 6
    min_duration_ms: int = 500
    min_letter_fraction: float = 0.5

    def __post_init__(self):
        if self.min_chars < 1 or self.min_duration_ms < 1:
            raise ValueError("min_chars and min_duration_ms must be positive")
        if not 0.0 <= self.min_letter_fraction <= 1.0:
            raise ValueError("min_letter_fraction must lie in [0, 1]")


def is_letter_or_digit(ch: str) -> bool:
    # combining marks count with the letters they attach to (Devanagari, Thai, ...)
    cat = unicodedata.category(ch)
    return cat[0] in "LM" or cat == "Nd"


def effective_char_count(text: str) -> int:
    return len(text.strip())


def letter_fraction(text: str) -> float:
    if not text:
        return 0.0
    return sum(map(is_letter_or_digit, text)) / len(text)


def classify_junk(cue: Cue, config: CleaningConfig = CleaningConfig()) -> Optional[DiscardReason]:
    """Return the first failing rule for ``cue``, or None if the cue is kept.

    Rules are checked in a fixed order: character count, then duration, then
    the share of letters and digits.
    """
    if effective_char_count(cue.text) < config.min_chars:
        return DiscardReason.TOO_SHORT
    if cue.end - cue.start < config.min_duration_ms:
        return DiscardReason.TOO_BRIEF
    if letter_fraction(cue.text) < config.min_letter_fraction:
        return DiscardReason.JUNK_TEXT
    return None
