"""SRT and WebVTT parsing into timed cues.

Both parsers work on raw bytes and decode one block at a time, so a block with
invalid UTF-8 is skipped (with a warning) without touching its neighbours.
Malformed blocks never abort a file; only I/O failure or a missing WebVTT
header is fatal.
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterator, List, Tuple, Union

BOM = b"\xef\xbb\xbf"

_TS = r"(\d{1,4}):([0-5]\d):([0-5]\d)[,.](\d{3})"
_SRT_TIMING = re.compile(rf"^\s*{_TS}\s*-->\s*{_TS}(?:\s.*)?$")
# hours are optional in WebVTT
_VTT_TS = r"(?:(\d{1,4}):)?([0-5]\d):([0-5]\d)\.(\d{3})"
_VTT_TIMING = re.compile(rf"^\s*{_VTT_TS}[ \t]+-->[ \t]+{_VTT_TS}(?:[ \t].*)?$")
_TAG = re.compile(r"<[^>]*>")
_VTT_MAGIC = re.compile(rb"^WEBVTT(?:[ \t].*)?$")


class SubtitleFormatError(ValueError):
    """The input cannot be parsed as the requested subtitle format at all."""


@dataclass(frozen=True)
class Cue:
    video_id: str
    ordinal: int
    start: int  # milliseconds
    end: int
    text: str

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid cue interval [{self.start}, {self.end})")

    @property
    def duration(self) -> int:
        return self.end - self.start


@dataclass
class ParseReport:
    cues: List[Cue] = field(default_factory=list)
    skipped: int = 0
    warnings: List[Tuple[int, str]] = field(default_factory=list)

    def _skip(self, line: int, message: str) -> None:
        self.skipped += 1
        self.warnings.append((line, message))


def format_timestamp(millis: int, sep: str = ",") -> str:
    """Render ``millis`` as ``HH:MM:SS,mmm`` (``sep='.'`` for WebVTT)."""
    if millis < 0:
        raise ValueError("negative timestamp")
    secs, ms = divmod(millis, 1000)
    mins, s = divmod(secs, 60)
    h, m = divmod(mins, 60)
    return f"{h:02d}:{m:02d}:{s:02d}{sep}{ms:03d}"


def parse_timestamp(text: str) -> int:
    """Parse ``HH:MM:SS,mmm``, ``HH:MM:SS.mmm`` or ``MM:SS.mmm`` into milliseconds."""
    m = re.fullmatch(_TS, text.strip()) or re.fullmatch(_VTT_TS, text.strip())
    if not m:
        raise ValueError(f"bad timestamp: {text!r}")
    return _millis(*m.groups())


def _millis(h, m, s, ms) -> int:
    return ((int(h or 0) * 60 + int(m)) * 60 + int(s)) * 1000 + int(ms)


def _read(source: Union[bytes, BinaryIO]) -> bytes:
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    data = bytes(data)
    if data.startswith(BOM):
        data = data[len(BOM):]
    return data


def _blocks(data: bytes) -> Iterator[Tuple[int, List[bytes]]]:
    """Yield (1-based first line number, lines) for each blank-line separated block."""
    block: List[bytes] = []
    first = 0
    for no, raw in enumerate(data.split(b"\n"), start=1):
        line = raw[:-1] if raw.endswith(b"\r") else raw
        if line.strip():
            if not block:
                first = no
            block.append(line)
        elif block:
            yield first, block
            block = []
    if block:
        yield first, block


def _decode(lines: List[bytes]) -> List[str]:
    return [line.decode("utf-8") for line in lines]


def _join_text(lines: List[str]) -> str:
    return " ".join(s for s in (line.strip() for line in lines) if s)


def parse_srt(source: Union[bytes, BinaryIO], video_id: str) -> ParseReport:
    """Parse SRT content.

    A block is an optional numeric counter, a timing line and zero or more
    text lines. Anything else is counted in ``skipped``.
    """
    report = ParseReport()
    for lineno, raw in _blocks(_read(source)):
        try:
            lines = _decode(raw)
        except UnicodeDecodeError as exc:
            report._skip(lineno, f"invalid UTF-8 in block: {exc.reason}")
            continue
        timing_at = 0
        if lines[0].strip().isdigit() and len(lines) > 1:
            timing_at = 1
        m = _SRT_TIMING.match(lines[timing_at])
        if not m:
            report._skip(lineno, "missing or malformed timing line")
            continue
        g = m.groups()
        start, end = _millis(*g[:4]), _millis(*g[4:])
        if end < start:
            report._skip(lineno + timing_at, "cue ends before it starts")
            continue
        report.cues.append(
            Cue(video_id, len(report.cues), start, end, _join_text(lines[timing_at + 1:]))
        )
    return report


def _vtt_text(lines: List[str]) -> str:
    text = html.unescape(_TAG.sub("", _join_text(lines)))
    return re.sub(r"\s*[\r\n]+\s*", " ", text).strip()


def parse_vtt(source: Union[bytes, BinaryIO], video_id: str) -> ParseReport:
    """Parse WebVTT content. Cue settings, NOTE/STYLE/REGION blocks and markup are dropped."""
    data = _read(source)
    blocks = _blocks(data)
    first_line = data.split(b"\n", 1)[0].rstrip(b"\r")
    if not _VTT_MAGIC.match(first_line):
        raise SubtitleFormatError("missing WEBVTT header")
    next(blocks, None)  # header block

    report = ParseReport()
    for lineno, raw in blocks:
        try:
            lines = _decode(raw)
        except UnicodeDecodeError as exc:
            report._skip(lineno, f"invalid UTF-8 in block: {exc.reason}")
            continue
        head = lines[0].split(None, 1)[0] if lines[0].strip() else ""
        if head in ("NOTE", "STYLE", "REGION") and "-->" not in lines[0]:
            continue
        timing_at = 0 if "-->" in lines[0] else 1
        m = _VTT_TIMING.match(lines[timing_at]) if timing_at < len(lines) else None
        if not m:
            report._skip(lineno, "missing or malformed timing line")
            continue
        g = m.groups()
        start, end = _millis(*g[:4]), _millis(*g[4:])
        if end < start:
            report._skip(lineno + timing_at, "cue ends before it starts")
            continue
        report.cues.append(
            Cue(video_id, len(report.cues), start, end, _vtt_text(lines[timing_at + 1:]))
        )
    return report


def sniff_format(data: bytes) -> str:
    """Guess ``"vtt"`` or ``"srt"`` from content; raise if neither fits."""
    if data.startswith(BOM):
        data = data[len(BOM):]
    if _VTT_MAGIC.match(data.split(b"\n", 1)[0].rstrip(b"\r")):
        return "vtt"
    head = data[:4096].decode("utf-8", errors="replace")
    if any(_SRT_TIMING.match(line.rstrip("\r")) for line in head.split("\n")):
        return "srt"
    raise SubtitleFormatError("unrecognized subtitle format")


def parse_auto(path: Union[str, Path]) -> ParseReport:
    path = Path(path)
    data = path.read_bytes()
    ext = path.suffix.lower()
    if ext in (".srt", ".vtt"):
        kind = ext[1:]
    else:
        try:
            kind = sniff_format(data)
        except SubtitleFormatError:
            raise SubtitleFormatError(f"{path}: unrecognized subtitle format") from None
    parser = parse_vtt if kind == "vtt" else parse_srt
    try:
        return parser(data, path.stem)
    except SubtitleFormatError as exc:
        raise SubtitleFormatError(f"{path}: {exc}") from None


def to_srt(cues: List[Cue]) -> str:
    """Serialize cues as SRT text (counters renumbered from 1)."""
    out = []
    for i, cue in enumerate(cues, start=1):
        out.append(
            f"{i}\n{format_timestamp(cue.start)} --> {format_timestamp(cue.end)}\n{cue.text}\n"
        )
    return "\n".join(out)
