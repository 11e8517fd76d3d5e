"""Exact time-coverage statistics per video and across a corpus.

Overlapping cues are resolved by letting the earlier cue (by start time, then
file order) keep the contested time, so labelled spans tile each video's
timeline exactly. All arithmetic is in integer milliseconds; fractions only
appear in ``finalize_report``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .cleaning import DiscardReason
from .ingest import Cue
from .langid import LanguageLabel

log = logging.getLogger(__name__)

NONE_KEY = "None"
MUSIC_KEY = "Music"
SHARDS = ("V3C1", "V3C2", "V3C3")
UNASSIGNED = "unassigned"
HIST_BINS = 102


@dataclass(frozen=True)
class Speech:
    label: LanguageLabel


@dataclass(frozen=True)
class Music:
    pass


@dataclass(frozen=True)
class Discarded:
    reason: DiscardReason


MUSIC = Music()
CueClass = Union[Speech, Music, Discarded]


@dataclass(frozen=True)
class ClassifiedCue:
    cue: Cue
    cls: CueClass

    @property
    def key(self) -> Optional[str]:
        """Span label this cue contributes, or None for discarded cues."""
        if isinstance(self.cls, Speech):
            return self.cls.label.key
        if isinstance(self.cls, Music):
            return MUSIC_KEY
        return None


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    label: str

    @property
    def length(self) -> int:
        return self.end - self.start


def partition_timeline(cues: Sequence[ClassifiedCue], duration_ms: int) -> List[Span]:
    """Tile ``[0, duration_ms)`` with labelled spans.

    Cues are swept in (start, ordinal) order; each contributes only the part
    of its interval that no earlier cue already covers. Uncovered time is
    labelled ``"None"``. Adjacent spans with the same label are merged.
    """
    if duration_ms <= 0:
        raise ValueError(f"video duration must be positive, got {duration_ms}")
    spans: List[Span] = []

    def emit(start: int, end: int, label: str) -> None:
        if end <= start:
            return
        if spans and spans[-1].label == label and spans[-1].end == start:
            spans[-1] = Span(spans[-1].start, end, label)
        else:
            spans.append(Span(start, end, label))

    frontier = 0
    for cc in sorted(cues, key=lambda c: (c.cue.start, c.cue.ordinal)):
        label = cc.key
        if label is None:
            continue
        start, end = cc.cue.start, cc.cue.end
        if end > duration_ms:
            log.warning("%s: cue %d ends at %d ms, past the video duration %d ms; clamped",
                        cc.cue.video_id, cc.cue.ordinal, end, duration_ms)
            end = duration_ms
        if end <= frontier:
            continue
        start = min(max(start, frontier), end)
        emit(frontier, start, NONE_KEY)
        emit(start, end, label)
        frontier = end
    emit(frontier, duration_ms, NONE_KEY)
    return spans


@dataclass
class VideoStats:
    video_id: str
    shard: str
    duration_ms: int
    covered_ms: Dict[str, int]
    music_ms: int = 0
    none_ms: int = 0
    discarded_count: int = 0

    @property
    def speech_ms(self) -> int:
        return sum(self.covered_ms.values())

    @property
    def speech_fraction(self) -> float:
        return self.speech_ms / self.duration_ms

    @property
    def music_fraction(self) -> float:
        return self.music_ms / self.duration_ms


def video_stats(cues: Sequence[ClassifiedCue], duration_ms: int, shard: str = UNASSIGNED,
                video_id: Optional[str] = None) -> VideoStats:
    covered: Dict[str, int] = {}
    music = none = 0
    for span in partition_timeline(cues, duration_ms):
        if span.label == NONE_KEY:
            none += span.length
        elif span.label == MUSIC_KEY:
            music += span.length
        else:
            covered[span.label] = covered.get(span.label, 0) + span.length
    discarded = sum(isinstance(c.cls, Discarded) for c in cues)
    if video_id is None:
        video_id = cues[0].cue.video_id if cues else ""
    return VideoStats(video_id, shard, duration_ms, dict(sorted(covered.items())), music, none, discarded)


def fraction_bin(part: int, whole: int) -> int:
    """Histogram bin for part/whole: 0 = exactly 0, 1..100 = 1-point bins, 101 = exactly 1."""
    if part <= 0:
        return 0
    if part >= whole:
        return HIST_BINS - 1
    return 1 + (100 * part) // whole


def bin_labels() -> List[str]:
    return ["exact_0"] + [f"{i}-{i + 1}" for i in range(100)] + ["exact_100"]


def _add_maps(a: Dict[str, int], b: Dict[str, int]) -> Dict[str, int]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class CoverageAccumulator:
    """Integer sums mergeable in any order; see ``merge_reports``."""

    label_ms: Dict[str, Dict[str, int]] = field(default_factory=dict)  # shard -> label -> ms
    duration_ms: Dict[str, int] = field(default_factory=dict)  # shard -> ms
    speech_hist: Tuple[int, ...] = (0,) * HIST_BINS
    music_hist: Tuple[int, ...] = (0,) * HIST_BINS
    video_count: int = 0
    music_video_count: int = 0

    @classmethod
    def from_video(cls, stats: VideoStats) -> "CoverageAccumulator":
        labels = dict(stats.covered_ms)
        if stats.music_ms:
            labels[MUSIC_KEY] = stats.music_ms
        if stats.none_ms:
            labels[NONE_KEY] = stats.none_ms
        labels = {k: v for k, v in sorted(labels.items()) if v}
        speech = [0] * HIST_BINS
        speech[fraction_bin(stats.speech_ms, stats.duration_ms)] = 1
        music = [0] * HIST_BINS
        if stats.music_ms > 0:
            music[fraction_bin(stats.music_ms, stats.duration_ms)] = 1
        return cls(
            {stats.shard: labels},
            {stats.shard: stats.duration_ms},
            tuple(speech),
            tuple(music),
            1,
            int(stats.music_ms > 0),
        )

    def merge(self, other: "CoverageAccumulator") -> "CoverageAccumulator":
        shards = sorted(self.label_ms.keys() | other.label_ms.keys())
        return CoverageAccumulator(
            {s: _add_maps(self.label_ms.get(s, {}), other.label_ms.get(s, {})) for s in shards},
            _add_maps(self.duration_ms, other.duration_ms),
            tuple(x + y for x, y in zip(self.speech_hist, other.speech_hist)),
            tuple(x + y for x, y in zip(self.music_hist, other.music_hist)),
            self.video_count + other.video_count,
            self.music_video_count + other.music_video_count,
        )

    __add__ = merge

    @property
    def total_duration_ms(self) -> int:
        return sum(self.duration_ms.values())

    def total_label_ms(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for labels in self.label_ms.values():
            out = _add_maps(out, labels)
        return out


def merge_reports(a: CoverageAccumulator, b: CoverageAccumulator) -> CoverageAccumulator:
    return a.merge(b)


@dataclass(frozen=True)
class CorpusReport:
    label_ms: Dict[str, Dict[str, int]]
    duration_ms: Dict[str, int]
    per_shard: Dict[str, Dict[str, float]]
    total: Dict[str, float]
    total_label_ms: Dict[str, int]
    speech_fraction_hist: Tuple[int, ...]
    music_fraction_hist: Tuple[int, ...]
    video_count: int
    music_video_count: int
    total_duration_ms: int
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def speech_share(self) -> float:
        """Share of corpus time covered by any spoken-language label."""
        speech = sum(v for k, v in self.total_label_ms.items() if k not in (NONE_KEY, MUSIC_KEY))
        return speech / self.total_duration_ms


def finalize_report(acc: CoverageAccumulator, meta: Optional[Dict[str, object]] = None) -> CorpusReport:
    total_ms = acc.total_duration_ms
    if total_ms <= 0:
        raise ValueError("cannot finalize a report over zero total duration")
    total_labels = acc.total_label_ms()
    per_shard = {
        shard: {k: v / acc.duration_ms[shard] for k, v in labels.items()}
        for shard, labels in sorted(acc.label_ms.items())
    }
    return CorpusReport(
        label_ms={s: dict(m) for s, m in sorted(acc.label_ms.items())},
        duration_ms=dict(sorted(acc.duration_ms.items())),
        per_shard=per_shard,
        total={k: v / total_ms for k, v in total_labels.items()},
        total_label_ms=total_labels,
        speech_fraction_hist=acc.speech_hist,
        music_fraction_hist=acc.music_hist,
        video_count=acc.video_count,
        music_video_count=acc.music_video_count,
        total_duration_ms=total_ms,
        meta=dict(meta or {}),
    )


def accumulator_from_report(report: CorpusReport) -> CoverageAccumulator:
    return CoverageAccumulator(
        {s: dict(m) for s, m in report.label_ms.items()},
        dict(report.duration_ms),
        tuple(report.speech_fraction_hist),
        tuple(report.music_fraction_hist),
        report.video_count,
        report.music_video_count,
    )
