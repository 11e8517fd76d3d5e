"""Share tables, coverage histograms and the JSON report.

Every emitter is a pure function of a finalized CorpusReport and produces
byte-identical output on repeated calls. Rounding to one decimal place happens
only in the tables; the JSON keeps integer milliseconds next to the shares.
"""

from __future__ import annotations

import csv
import io
import json
from decimal import Decimal
from typing import Dict, List, Sequence, Tuple

from .coverage import (
    CorpusReport,
    CoverageAccumulator,
    bin_labels,
    finalize_report,
)

FORMATS = ("json", "csv-table", "csv-histogram", "text-table")
HIST_HEADER = ("bin_label", "count", "fraction_of_videos")


def _percent(x: float) -> str:
    return f"{100 * x:.1f}%"


def ranked_labels(report: CorpusReport) -> List[str]:
    """Labels by total covered time, descending; ties by label name."""
    return sorted(report.total_label_ms, key=lambda k: (-report.total_label_ms[k], k))


def emit_share_table(report: CorpusReport, top_k: int = 10) -> Tuple[List[str], List[List[str]]]:
    """Header and rows of the top ``top_k`` labels, one column per shard plus total.

    "None" (no transcript) and "Music" rank alongside the languages.
    """
    if top_k < 1:
        raise ValueError("top_k must be positive")
    shards = list(report.per_shard)
    header = ["label", *shards, "total"]
    rows = []
    for label in ranked_labels(report)[:top_k]:
        row = [label]
        row += [_percent(report.per_shard[s].get(label, 0.0)) for s in shards]
        row.append(_percent(report.total[label]))
        rows.append(row)
    return header, rows


def emit_histogram(report: CorpusReport, which: str = "speech") -> List[Tuple[str, int, str]]:
    """102 rows (exact_0, 0-1, ..., 99-100, exact_100) of counts and population fractions.

    The speech histogram covers every video; the music histogram only videos
    with some estimated music.
    """
    if which == "speech":
        counts, population = report.speech_fraction_hist, report.video_count
    elif which == "music":
        counts, population = report.music_fraction_hist, report.music_video_count
    else:
        raise ValueError(f"unknown histogram {which!r}")
    return [
        (label, n, f"{n / population if population else 0.0:.6f}")
        for label, n in zip(bin_labels(), counts)
    ]


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def share_table_csv(report: CorpusReport, top_k: int = 10) -> str:
    return _csv(*emit_share_table(report, top_k))


def histogram_csv(report: CorpusReport, which: str) -> str:
    return _csv(HIST_HEADER, emit_histogram(report, which))


def share_table_text(report: CorpusReport, top_k: int = 10) -> str:
    header, rows = emit_share_table(report, top_k)
    table = [header, *rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    lines = []
    for r in table:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


# -- JSON -----------------------------------------------------------------------

def _share(x: float) -> Decimal:
    return Decimal(f"{x:.6f}")


def _dump(obj, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_dump(obj[k], indent + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(x, (int, Decimal)) and not isinstance(x, bool) for x in obj):
            return "[" + ", ".join(str(x) for x in obj) + "]"
        return "[\n" + ",\n".join(f"{inner}{_dump(x, indent + 1)}" for x in obj) + f"\n{pad}]"
    if isinstance(obj, Decimal):
        return str(obj)
    return json.dumps(obj, ensure_ascii=False)


def report_document(report: CorpusReport) -> Dict[str, object]:
    return {
        "meta": report.meta,
        "video_count": report.video_count,
        "music_video_count": report.music_video_count,
        "total_duration_ms": report.total_duration_ms,
        "duration_ms": report.duration_ms,
        "label_ms": report.label_ms,
        "total_label_ms": report.total_label_ms,
        "shares": {
            "total": {k: _share(v) for k, v in report.total.items()},
            "per_shard": {s: {k: _share(v) for k, v in m.items()} for s, m in report.per_shard.items()},
        },
        "speech_share": _share(report.speech_share),
        "histogram_bins": bin_labels(),
        "speech_fraction_hist": list(report.speech_fraction_hist),
        "music_fraction_hist": list(report.music_fraction_hist),
    }


def emit_json(report: CorpusReport) -> str:
    """Deterministic JSON: sorted keys, shares as decimals with 6 fractional digits."""
    return _dump(report_document(report)) + "\n"


def report_from_json(text: str) -> CorpusReport:
    """Rebuild a CorpusReport from ``emit_json`` output (integer fields are authoritative)."""
    doc = json.loads(text, parse_float=Decimal)
    acc = CoverageAccumulator(
        {s: dict(m) for s, m in doc["label_ms"].items()},
        dict(doc["duration_ms"]),
        tuple(doc["speech_fraction_hist"]),
        tuple(doc["music_fraction_hist"]),
        doc["video_count"],
        doc["music_video_count"],
    )
    return finalize_report(acc, doc["meta"])
