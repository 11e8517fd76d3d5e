"""Run configuration, manifests and config validation."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .cleaning import CleaningConfig
from .coverage import SHARDS
from .langid import SHIPPED_LANGUAGES, DetectionConfig, profile_dir, profiles_version
from .music import MusicConfig, MusicTermList, TermListError, read_term_lines
from .reporting import FORMATS


class ConfigError(ValueError):
    pass


class ManifestError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path, self.line, self.message = path, line, message


@dataclass(frozen=True)
class RunConfig:
    inputs: Tuple[Path, ...] = ()
    durations: Optional[Path] = None
    shards: Optional[Path] = None
    terms: Optional[Path] = None
    cleaning: CleaningConfig = CleaningConfig()
    max_residual_fraction: float = 0.2
    detection: DetectionConfig = DetectionConfig()
    detector: str = "builtin"
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)
    out: Path = Path("transcov-report")
    formats: Tuple[str, ...] = FORMATS
    top_k: int = 10

    def __post_init__(self):
        if self.workers < 1:
            raise ConfigError("workers must be positive")
        bad = set(self.formats) - set(FORMATS)
        if bad:
            raise ConfigError(f"unknown report format(s): {', '.join(sorted(bad))}")

    def music_config(self) -> MusicConfig:
        terms = MusicTermList.load(self.terms) if self.terms else MusicTermList.default()
        return MusicConfig(terms, self.max_residual_fraction)

    def analysis_settings(self) -> Dict[str, object]:
        """Everything that influences the numbers in a report (not paths or worker count)."""
        return {
            "min_chars": self.cleaning.min_chars,
            "min_duration_ms": self.cleaning.min_duration_ms,
            "min_letter_fraction": repr(self.cleaning.min_letter_fraction),
            "max_residual_fraction": repr(self.max_residual_fraction),
            "music_terms": list(self.music_config().terms.terms),
            "languages": sorted(self.detection.enabled_languages),
            "min_confidence_margin": repr(self.detection.min_confidence_margin),
            "min_detect_chars": self.detection.min_detect_chars,
            "detector": self.detector,
            "profiles_version": profiles_version() if self.detector == "builtin" else None,
        }

    def digest(self) -> str:
        canonical = json.dumps(self.analysis_settings(), sort_keys=True, ensure_ascii=False,
                               separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


_KEYS = {
    "inputs", "durations", "shards", "terms", "min_chars", "min_duration_ms", "min_letter_fraction",
    "max_residual_fraction", "languages", "min_confidence_margin", "min_detect_chars", "detector",
    "workers", "out", "format", "top_k",
}


def _split(value) -> List[str]:
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    return [str(v) for v in value]


def config_from_mapping(values: Dict[str, object], base: Optional[RunConfig] = None,
                        relative_to: Optional[Path] = None) -> RunConfig:
    """Overlay flat key/value settings (config file or CLI flags) on ``base``.

    Keys with value None are ignored, so CLI defaults never clobber the file.
    """
    cfg = base or RunConfig()
    unknown = set(values) - _KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    v = {k: x for k, x in values.items() if x is not None}

    def path(p) -> Path:
        p = Path(p)
        return p if relative_to is None or p.is_absolute() else relative_to / p

    try:
        casts = {"min_chars": int, "min_duration_ms": int, "min_letter_fraction": float}
        cleaning = replace(cfg.cleaning, **{k: cast(v[k]) for k, cast in casts.items() if k in v})
        detection = DetectionConfig(
            frozenset(_split(v["languages"])) if "languages" in v else cfg.detection.enabled_languages,
            float(v.get("min_confidence_margin", cfg.detection.min_confidence_margin)),
            int(v.get("min_detect_chars", cfg.detection.min_detect_chars)),
        )
        max_residual = float(v.get("max_residual_fraction", cfg.max_residual_fraction))
        MusicConfig(MusicTermList(()), max_residual)
        return RunConfig(
            inputs=tuple(path(p) for p in _split(v["inputs"])) if "inputs" in v else cfg.inputs,
            durations=path(v["durations"]) if "durations" in v else cfg.durations,
            shards=path(v["shards"]) if "shards" in v else cfg.shards,
            terms=path(v["terms"]) if "terms" in v else cfg.terms,
            cleaning=cleaning,
            max_residual_fraction=max_residual,
            detection=detection,
            detector=str(v.get("detector", cfg.detector)),
            workers=int(v.get("workers", cfg.workers)),
            out=path(v["out"]) if "out" in v else cfg.out,
            formats=tuple(_split(v["format"])) if "format" in v else cfg.formats,
            top_k=int(v.get("top_k", cfg.top_k)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def read_config_file(path: Path) -> Dict[str, object]:
    """Parse a JSON config document; errors carry the line number."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
    except UnicodeDecodeError as exc:
        raise ManifestError(path, 1, f"not UTF-8: {exc.reason}") from None
    if not isinstance(doc, dict):
        raise ManifestError(path, 1, "config must be a JSON object")
    return doc


def load_config(path: Path, base: Optional[RunConfig] = None) -> RunConfig:
    return config_from_mapping(read_config_file(path), base, relative_to=Path(path).parent)


# -- manifests -----------------------------------------------------------------

def _read_manifest(path: Path, value_column: str) -> List[Tuple[int, str, str]]:
    try:
        text = Path(path).read_bytes().decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ManifestError(path, 1, f"not UTF-8: {exc.reason}") from None
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    header = [h.strip() for h in header] if header else []
    for col in ("video_id", value_column):
        if col not in header:
            raise ManifestError(path, 1, f"missing {col!r} column in header")
    vi, ci = header.index("video_id"), header.index(value_column)
    rows = []
    for row in reader:
        if not row or not any(c.strip() for c in row):
            continue
        if len(row) <= max(vi, ci):
            raise ManifestError(path, reader.line_num, "too few columns")
        rows.append((reader.line_num, row[vi].strip(), row[ci].strip()))
    return rows


def _with_stems(mapping: Dict[str, object]) -> Dict[str, object]:
    out = dict(mapping)
    for key, value in mapping.items():
        out.setdefault(Path(key).stem, value)
    return out


def load_durations(path: Path) -> Dict[str, int]:
    durations = {}
    for line, vid, value in _read_manifest(path, "duration_ms"):
        try:
            ms = int(value)
        except ValueError:
            raise ManifestError(path, line, f"duration_ms is not an integer: {value!r}") from None
        if ms <= 0:
            raise ManifestError(path, line, f"duration_ms must be positive: {ms}")
        durations[vid] = ms
    return _with_stems(durations)


def load_shards(path: Path) -> Dict[str, str]:
    shards = {}
    for line, vid, value in _read_manifest(path, "shard"):
        if value not in SHARDS:
            raise ManifestError(path, line, f"unknown shard {value!r} (expected one of {', '.join(SHARDS)})")
        shards[vid] = value
    return _with_stems(shards)


# -- validation ------------------------------------------------------------------

def _line_of(text: str, key: str) -> int:
    pos = text.find(json.dumps(key))
    return text.count("\n", 0, pos) + 1 if pos >= 0 else 1


def validate_config(path: Path) -> List[str]:
    """Diagnostics (``file:line: message``) for a config file and the files it names."""
    problems: List[str] = []
    try:
        raw = read_config_file(path)
    except (OSError, ManifestError) as exc:
        return [str(exc)]
    text = Path(path).read_text(encoding="utf-8")
    for key, value in raw.items():
        try:
            config_from_mapping({key: value}, relative_to=Path(path).parent)
        except ConfigError as exc:
            problems.append(f"{path}:{_line_of(text, key)}: {exc}")
    if problems:
        return problems
    try:
        cfg = config_from_mapping(raw, relative_to=Path(path).parent)
    except ConfigError as exc:
        return [f"{path}:1: {exc}"]

    for p in cfg.inputs:
        if not p.exists():
            problems.append(f"{path}:1: input path does not exist: {p}")
    for manifest, loader in ((cfg.durations, load_durations), (cfg.shards, load_shards)):
        if manifest is None:
            continue
        try:
            loader(manifest)
        except ManifestError as exc:
            problems.append(str(exc))
        except OSError as exc:
            problems.append(f"{manifest}:1: {exc.strerror}")
    if cfg.terms is not None:
        try:
            read_term_lines(cfg.terms.read_bytes())
        except TermListError as exc:
            problems.append(f"{cfg.terms}:{exc.line}: {exc}")
        except OSError as exc:
            problems.append(f"{cfg.terms}:1: {exc.strerror}")
    if cfg.detector == "builtin":
        available = {p.stem for p in profile_dir().glob("*.tsv")}
        for code in sorted(cfg.detection.enabled_languages - available):
            problems.append(f"{path}:1: no shipped profile for language {code!r} "
                            f"(available: {', '.join(SHIPPED_LANGUAGES)})")
    return problems
