"""Heuristic detection of cues that annotate music rather than transcribe speech.

ASR models commonly emit a tag such as "[Music]" (or a descriptive phrase in
some languages) for passages of pure music. A cue counts as music when, after
discounting every occurrence of a known music term, almost no letters remain.
Occurrences may overlap; a letter is discounted if any occurrence covers it,
which keeps the decision monotone in the term list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, List, Tuple, Union

from .cleaning import is_letter_or_digit
from .ingest import Cue

_SPACES = re.compile(r"\s+")


def normalize_for_matching(text: str) -> str:
    kept = "".join(ch for ch in text.casefold() if ch.isspace() or is_letter_or_digit(ch))
    return _SPACES.sub(" ", kept).strip()


@dataclass(frozen=True)
class MusicTermList:
    """Normalized, de-duplicated music terms, longest first."""

    terms: Tuple[str, ...]

    @classmethod
    def from_terms(cls, terms: Iterable[str]) -> "MusicTermList":
        seen = set()
        for t in terms:
            n = normalize_for_matching(t)
            if n:
                seen.add(n)
        return cls(tuple(sorted(seen, key=lambda t: (-len(t), t))))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "MusicTermList":
        return cls.from_terms(read_term_lines(Path(path).read_bytes()))

    @classmethod
    def default(cls) -> "MusicTermList":
        data = resources.files("transcov.data").joinpath("music_terms.txt").read_bytes()
        return cls.from_terms(read_term_lines(data))

    def __len__(self) -> int:
        return len(self.terms)


class TermListError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def read_term_lines(data: bytes) -> List[str]:
    """Parse a term-list file: one term per line, '#' comments and blanks ignored."""
    if data.startswith(b"\xef\xbb\xbf"):
        data = data[3:]
    terms = []
    for no, raw in enumerate(data.split(b"\n"), start=1):
        try:
            line = raw.decode("utf-8").strip()
        except UnicodeDecodeError as exc:
            raise TermListError(no, f"invalid UTF-8 ({exc.reason})") from None
        if line and not line.startswith("#"):
            terms.append(line)
    return terms


@dataclass(frozen=True)
class MusicConfig:
    terms: MusicTermList = field(default_factory=MusicTermList.default)
    max_residual_fraction: float = 0.2

    def __post_init__(self):
        if not 0.0 <= self.max_residual_fraction < 0.5:
            raise ValueError("max_residual_fraction must lie in [0, 0.5)")


def _term_mask(normalized: str, terms: MusicTermList) -> Tuple[List[bool], int]:
    """Mark every position covered by some occurrence of some term."""
    covered = [False] * len(normalized)
    hits = 0
    for term in terms.terms:
        i = normalized.find(term)
        while i >= 0:
            hits += 1
            covered[i:i + len(term)] = [True] * len(term)
            i = normalized.find(term, i + 1)
    return covered, hits


def _residual(normalized: str, covered: List[bool]) -> int:
    return sum(1 for ch, c in zip(normalized, covered) if not c and is_letter_or_digit(ch))


def residual_letter_count(normalized: str, terms: MusicTermList) -> int:
    covered, _ = _term_mask(normalized, terms)
    return _residual(normalized, covered)


def is_music(cue: Union[Cue, str], config: MusicConfig) -> bool:
    text = cue.text if isinstance(cue, Cue) else cue
    normalized = normalize_for_matching(text)
    covered, hits = _term_mask(normalized, config.terms)
    if not hits:
        return False
    total = sum(map(is_letter_or_digit, normalized))
    if total == 0:
        return True
    return _residual(normalized, covered) / total <= config.max_residual_fraction
