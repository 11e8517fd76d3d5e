"""Batch pipeline: parse -> clean -> music -> language -> coverage, over many files."""

from __future__ import annotations

import logging
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import __version__
from .cleaning import CleaningConfig, classify_junk
from .config import RunConfig, load_durations, load_shards
from .coverage import (
    MUSIC,
    UNASSIGNED,
    ClassifiedCue,
    CorpusReport,
    CoverageAccumulator,
    Discarded,
    Speech,
    finalize_report,
    video_stats,
)
from .ingest import Cue, parse_auto
from .langid import Detector, label_cue, load_detector, profiles_version
from .music import MusicConfig, is_music
from .reporting import emit_json, histogram_csv, share_table_csv, share_table_text
from .unicode_scripts import UNICODE_VERSION

log = logging.getLogger(__name__)

SUBTITLE_SUFFIXES = (".srt", ".vtt")


@dataclass
class RunSummary:
    files_processed: int = 0
    files_failed: int = 0
    cues_total: int = 0
    cues_discarded: Dict[str, int] = field(default_factory=dict)
    cues_music: int = 0
    cues_speech: int = 0
    blocks_skipped: int = 0
    wall_time_ms: int = 0

    def merge(self, other: "RunSummary") -> "RunSummary":
        discarded = dict(self.cues_discarded)
        for k, v in other.cues_discarded.items():
            discarded[k] = discarded.get(k, 0) + v
        return RunSummary(
            self.files_processed + other.files_processed,
            self.files_failed + other.files_failed,
            self.cues_total + other.cues_total,
            dict(sorted(discarded.items())),
            self.cues_music + other.cues_music,
            self.cues_speech + other.cues_speech,
            self.blocks_skipped + other.blocks_skipped,
            max(self.wall_time_ms, other.wall_time_ms),
        )

    @property
    def discarded_total(self) -> int:
        return sum(self.cues_discarded.values())


@dataclass
class Classifier:
    cleaning: CleaningConfig
    music: MusicConfig
    detector: Detector

    def classify(self, cue: Cue) -> ClassifiedCue:
        reason = classify_junk(cue, self.cleaning)
        if reason is not None:
            return ClassifiedCue(cue, Discarded(reason))
        if is_music(cue, self.music):
            return ClassifiedCue(cue, MUSIC)
        return ClassifiedCue(cue, Speech(label_cue(cue.text, self.detector)))


def discover(inputs: Iterable[Path]) -> List[Path]:
    """All subtitle files under ``inputs``, sorted by path. Explicit files are kept as given."""
    found = set()
    for p in map(Path, inputs):
        if p.is_dir():
            found.update(f for f in p.rglob("*") if f.is_file() and f.suffix.lower() in SUBTITLE_SUFFIXES)
        elif p.is_file():
            found.add(p)
    return sorted(found)


def process_file(path: Path, classifier: Classifier, durations: Dict[str, int],
                 shards: Dict[str, str]) -> Tuple[CoverageAccumulator, RunSummary]:
    """One file through the whole pipeline. Failures are logged and counted, never raised."""
    summary = RunSummary()
    try:
        parsed = parse_auto(path)
        for line, msg in parsed.warnings:
            log.warning("%s:%d: %s", path, line, msg)
        video_id = path.stem
        classified = [classifier.classify(c) for c in parsed.cues]
        duration = durations.get(video_id)
        if duration is None:
            duration = max((c.end for c in parsed.cues), default=0)
            if duration <= 0:
                raise ValueError("no duration in manifest and no cues to estimate it from")
            log.warning("%s: no duration in manifest; using last cue end (%d ms)", path, duration)
        stats = video_stats(classified, duration, shards.get(video_id, UNASSIGNED), video_id)
    except Exception as exc:  # noqa: BLE001 - one bad file must not stop the run
        log.error("%s: %s", path, exc)
        summary.files_failed = 1
        return CoverageAccumulator(), summary

    summary.files_processed = 1
    summary.blocks_skipped = parsed.skipped
    summary.cues_total = len(classified)
    for cc in classified:
        if isinstance(cc.cls, Discarded):
            key = cc.cls.reason.value
            summary.cues_discarded[key] = summary.cues_discarded.get(key, 0) + 1
        elif cc.cls is MUSIC:
            summary.cues_music += 1
        else:
            summary.cues_speech += 1
    summary.cues_discarded = dict(sorted(summary.cues_discarded.items()))
    return CoverageAccumulator.from_video(stats), summary


# -- worker pool -------------------------------------------------------------------

_STATE: Optional[Tuple[Classifier, Dict[str, int], Dict[str, str]]] = None


def _init_worker(config: RunConfig, durations: Dict[str, int], shards: Dict[str, str]) -> None:
    global _STATE
    classifier = Classifier(config.cleaning, config.music_config(),
                            load_detector(config.detector, config.detection))
    _STATE = (classifier, durations, shards)


def _process_chunk(paths: Sequence[Path]) -> Tuple[CoverageAccumulator, RunSummary]:
    classifier, durations, shards = _STATE
    acc, summary = CoverageAccumulator(), RunSummary()
    for path in paths:
        a, s = process_file(path, classifier, durations, shards)
        acc, summary = acc.merge(a), summary.merge(s)
    return acc, summary


def _chunks(items: Sequence[Path], workers: int) -> List[Sequence[Path]]:
    size = max(1, math.ceil(len(items) / (workers * 4)))
    return [items[i:i + size] for i in range(0, len(items), size)]


def run_pipeline(config: RunConfig, files: Sequence[Path]) -> Tuple[CoverageAccumulator, RunSummary]:
    durations = load_durations(config.durations) if config.durations else {}
    shards = load_shards(config.shards) if config.shards else {}
    started = time.monotonic()
    if config.workers == 1:
        _init_worker(config, durations, shards)
        acc, summary = _process_chunk(files)
    else:
        acc, summary = CoverageAccumulator(), RunSummary()
        with ProcessPoolExecutor(config.workers, initializer=_init_worker,
                                 initargs=(config, durations, shards)) as pool:
            for a, s in pool.map(_process_chunk, _chunks(files, config.workers)):
                acc, summary = acc.merge(a), summary.merge(s)
    summary.wall_time_ms = int((time.monotonic() - started) * 1000)
    return acc, summary


def report_meta(config: RunConfig) -> Dict[str, object]:
    return {
        "tool": "transcov",
        "tool_version": __version__,
        "unicode_version": UNICODE_VERSION,
        "profiles_version": profiles_version(),
        "config_digest": config.digest(),
        "settings": config.analysis_settings(),
        "duration_manifest": str(config.durations) if config.durations else None,
        "shard_manifest": str(config.shards) if config.shards else None,
    }


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


REPORT_FILES = {
    "json": ("report.json",),
    "csv-table": ("shares.csv",),
    "csv-histogram": ("speech_histogram.csv", "music_histogram.csv"),
    "text-table": ("shares.txt",),
}


def write_reports(report: CorpusReport, out_dir: Path, formats: Sequence[str], top_k: int = 10) -> List[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        if fmt == "json":
            payloads = [emit_json(report)]
        elif fmt == "csv-table":
            payloads = [share_table_csv(report, top_k)]
        elif fmt == "csv-histogram":
            payloads = [histogram_csv(report, "speech"), histogram_csv(report, "music")]
        elif fmt == "text-table":
            payloads = [share_table_text(report, top_k)]
        else:
            raise ValueError(f"unknown format {fmt!r}")
        for name, text in zip(REPORT_FILES[fmt], payloads):
            path = out_dir / name
            _atomic_write(path, text)
            written.append(path)
    return written


def scan(config: RunConfig) -> Tuple[Optional[CorpusReport], RunSummary]:
    """Run the pipeline over ``config.inputs``; report is None when nothing had a duration."""
    files = discover(config.inputs)
    if not files:
        raise FileNotFoundError("no subtitle files found")
    acc, summary = run_pipeline(config, files)
    if acc.total_duration_ms <= 0:
        return None, summary
    return finalize_report(acc, report_meta(config)), summary
