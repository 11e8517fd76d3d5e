"""Per-cue language labels: a character-trigram detector with a script fallback.

The built-in detector scores text against one log-probability trigram profile
per language and abstains when the winner is not clear. Any object with a
``detect(text) -> Optional[str]`` method can stand in for it (see
``load_detector``); when the detector abstains the cue is labelled with the
majority Unicode script of its characters.
"""

from __future__ import annotations

import hashlib
import importlib
import math
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Protocol, Union

from .unicode_scripts import script_majority

SHIPPED_LANGUAGES = ("bg", "de", "en", "es", "fr", "it", "nl", "pt", "ru")
PROFILE_FORMAT = "transcov-profile"
MIN_TRAINING_LETTERS = 10_000
MIN_PROFILE_TRIGRAMS = 100


# -- labels -------------------------------------------------------------------

@dataclass(frozen=True)
class Language:
    code: str

    def __post_init__(self):
        if not re.fullmatch(r"[a-z]{2}", self.code):
            raise ValueError(f"not an ISO 639-1 code: {self.code!r}")

    @property
    def key(self) -> str:
        return self.code


@dataclass(frozen=True)
class Script:
    name: str

    @property
    def key(self) -> str:
        return f"Script:{self.name}"


@dataclass(frozen=True)
class Unknown:
    @property
    def key(self) -> str:
        return "Unknown"


UNKNOWN = Unknown()
LanguageLabel = Union[Language, Script, Unknown]


def parse_label(key: str) -> LanguageLabel:
    if key == "Unknown":
        return UNKNOWN
    if key.startswith("Script:"):
        return Script(key[len("Script:"):])
    return Language(key)


# -- text features --------------------------------------------------------------

def _is_letter(ch: str) -> bool:
    return unicodedata.category(ch)[0] in "LM"


def letter_count(text: str) -> int:
    return sum(map(_is_letter, text))


def trigrams(text: str) -> Iterator[str]:
    """Character trigrams of each casefolded word, padded with ``_`` on both sides."""
    letters_only = "".join(ch if _is_letter(ch) else " " for ch in text.casefold())
    for word in letters_only.split():
        padded = f"_{word}_"
        for i in range(len(padded) - 2):
            yield padded[i:i + 3]


def _sig9(x: float) -> float:
    return float(f"{x:.9g}")


# -- profiles -------------------------------------------------------------------

class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class DetectorProfile:
    language: str
    trigram_weights: Mapping[str, float]
    unseen_weight: float
    prior: float = 0.0
    version: str = "1"

    def __post_init__(self):
        Language(self.language)
        if len(self.trigram_weights) < MIN_PROFILE_TRIGRAMS:
            raise ValueError(f"profile {self.language} has fewer than {MIN_PROFILE_TRIGRAMS} trigrams")
        values = list(self.trigram_weights.values()) + [self.unseen_weight, self.prior]
        if not all(math.isfinite(w) for w in values):
            raise ValueError(f"profile {self.language} has non-finite weights")

    def weight(self, trigram: str) -> float:
        return self.trigram_weights.get(trigram, self.unseen_weight)

    def shifted(self, offset: float) -> "DetectorProfile":
        """Same profile with ``offset`` added to every trigram weight (unseen included)."""
        return DetectorProfile(
            self.language,
            {t: w + offset for t, w in self.trigram_weights.items()},
            self.unseen_weight + offset,
            self.prior,
            self.version,
        )

    def dumps(self) -> str:
        lines = [
            f"#{PROFILE_FORMAT}\tlang={self.language}\tversion={self.version}"
            f"\tprior={self.prior:.9g}\tunseen={self.unseen_weight:.9g}"
        ]
        for tri in sorted(self.trigram_weights):
            lines.append(f"{tri}\t{self.trigram_weights[tri]:.9g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "DetectorProfile":
        lines = text.split("\n")
        head = lines[0].split("\t")
        if head[0] != f"#{PROFILE_FORMAT}":
            raise ValueError("not a trigram profile (bad header)")
        meta = dict(part.split("=", 1) for part in head[1:])
        weights = {}
        for no, line in enumerate(lines[1:], start=2):
            if not line:
                continue
            tri, sep, w = line.partition("\t")
            if not sep or len(tri) != 3:
                raise ValueError(f"line {no}: expected 'trigram<TAB>weight'")
            weights[tri] = float(w)
        return cls(meta["lang"], weights, float(meta["unseen"]), float(meta.get("prior", 0)),
                   meta.get("version", "1"))


def train_profile(corpus: Iterable[str], language: str, *, min_count: int = 1,
                  version: str = "1") -> DetectorProfile:
    """Fit add-one smoothed log relative trigram frequencies on ``corpus``.

    ``corpus`` is any iterable of text chunks (a file object works). Trigrams
    seen fewer than ``min_count`` times are left to the unseen weight.
    """
    counts: Counter = Counter()
    letters = 0
    for chunk in corpus:
        letters += letter_count(chunk)
        counts.update(trigrams(chunk))
    if letters < MIN_TRAINING_LETTERS:
        raise TrainingError(
            f"corpus for {language!r} has {letters} letters; need at least {MIN_TRAINING_LETTERS}"
        )
    total = sum(counts.values())
    denom = total + len(counts) + 1
    weights = {t: _sig9(math.log((c + 1) / denom)) for t, c in counts.items() if c >= min_count}
    return DetectorProfile(language, weights, _sig9(math.log(1 / denom)), 0.0, version)


def profile_dir() -> Path:
    return Path(str(resources.files("transcov.data").joinpath("profiles")))


def load_profiles(languages: Optional[Iterable[str]] = None,
                  directory: Optional[Union[str, Path]] = None) -> Dict[str, DetectorProfile]:
    directory = Path(directory) if directory else profile_dir()
    wanted = sorted(languages) if languages is not None else sorted(
        p.stem for p in directory.glob("*.tsv"))
    profiles = {}
    for code in wanted:
        path = directory / f"{code}.tsv"
        if not path.exists():
            raise FileNotFoundError(f"no trigram profile for language {code!r} in {directory}")
        profiles[code] = DetectorProfile.loads(path.read_text(encoding="utf-8"))
    return profiles


def profiles_version(directory: Optional[Union[str, Path]] = None) -> str:
    """Short digest over the shipped profile files, for provenance records."""
    directory = Path(directory) if directory else profile_dir()
    h = hashlib.sha256()
    for path in sorted(directory.glob("*.tsv")):
        h.update(path.name.encode())
        h.update(path.read_bytes())
    return h.hexdigest()[:12]


# -- detection --------------------------------------------------------------------

@dataclass(frozen=True)
class DetectionConfig:
    enabled_languages: FrozenSet[str] = frozenset(SHIPPED_LANGUAGES)
    min_confidence_margin: float = 1.0
    min_detect_chars: int = 6

    def __post_init__(self):
        object.__setattr__(self, "enabled_languages", frozenset(self.enabled_languages))
        if not self.enabled_languages:
            raise ValueError("at least one language must be enabled")
        for code in self.enabled_languages:
            Language(code)
        if self.min_confidence_margin < 0:
            raise ValueError("min_confidence_margin must be non-negative")
        if self.min_detect_chars < 1:
            raise ValueError("min_detect_chars must be positive")


class Detector(Protocol):
    def detect(self, text: str) -> Optional[str]:
        """ISO 639-1 code of the language of ``text``, or None to abstain."""


class TrigramDetector:
    """Argmax over summed trigram log-probabilities, with a margin-based abstain.

    Trigrams that no enabled profile has seen carry no evidence and are
    skipped, so text in a script none of the profiles covers is abstained on.
    """

    def __init__(self, profiles: Union[Mapping[str, DetectorProfile], Iterable[DetectorProfile]],
                 config: DetectionConfig = DetectionConfig()):
        if isinstance(profiles, Mapping):
            profiles = profiles.values()
        by_lang = {p.language: p for p in profiles}
        missing = config.enabled_languages - by_lang.keys()
        if missing:
            raise ValueError(f"no profile for enabled languages: {', '.join(sorted(missing))}")
        self.config = config
        self.profiles = [by_lang[code] for code in sorted(config.enabled_languages)]
        self._known = frozenset().union(*(p.trigram_weights for p in self.profiles))

    def _score(self, text: str):
        grams = [t for t in trigrams(text) if t in self._known]
        scores = {p.language: p.prior + math.fsum(p.weight(t) for t in grams) for p in self.profiles}
        return scores, len(grams)

    def scores(self, text: str) -> Dict[str, float]:
        return self._score(text)[0]

    def detect(self, text: str) -> Optional[str]:
        if letter_count(text) < self.config.min_detect_chars:
            return None
        scores, used = self._score(text)
        if not used:
            return None
        ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        if len(ranked) > 1 and ranked[0][1] - ranked[1][1] < self.config.min_confidence_margin:
            return None
        return ranked[0][0]


def detect_language(text: str, profiles, config: DetectionConfig = DetectionConfig()) -> Optional[str]:
    return TrigramDetector(profiles, config).detect(text)


class LinguaDetector:
    """Adapter for the ``lingua-language-detector`` package (optional dependency)."""

    def __init__(self, languages: Optional[Iterable[str]] = None, min_relative_distance: float = 0.0):
        import lingua

        if languages:
            isos = [getattr(lingua.IsoCode639_1, code.upper()) for code in sorted(languages)]
            builder = lingua.LanguageDetectorBuilder.from_iso_codes_639_1(*isos)
        else:
            builder = lingua.LanguageDetectorBuilder.from_all_languages()
        self._detector = builder.with_minimum_relative_distance(min_relative_distance).build()

    def detect(self, text: str) -> Optional[str]:
        lang = self._detector.detect_language_of(text)
        return None if lang is None else lang.iso_code_639_1.name.lower()


def load_detector(name: str = "builtin", config: DetectionConfig = DetectionConfig()) -> Detector:
    """Build a detector by name: ``builtin``, ``lingua`` or ``package.module:factory``.

    A factory is called with the DetectionConfig and must return a Detector.
    """
    if name == "builtin":
        return TrigramDetector(load_profiles(config.enabled_languages), config)
    if name == "lingua":
        return LinguaDetector()
    module, sep, attr = name.partition(":")
    if not sep:
        raise ValueError(f"unknown detector {name!r}")
    return getattr(importlib.import_module(module), attr)(config)


def label_cue(text: str, detector: Detector) -> LanguageLabel:
    code = detector.detect(text)
    if code is not None:
        return Language(code)
    script = script_majority(text)
    return Script(script) if script is not None else UNKNOWN
