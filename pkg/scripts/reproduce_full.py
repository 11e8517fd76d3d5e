"""Full-corpus reproduction check against the published V3C transcript figures.

Needs the released transcripts on disk (not downloaded by this script) and a
duration manifest. Runs the scan once per detector and compares headline
shares with the published numbers.

    python scripts/reproduce_full.py /data/v3c/transcripts --durations durations.csv \
        --shards shards.csv --detector builtin --detector lingua
"""

import argparse
import sys
from pathlib import Path

from transcov.config import RunConfig
from transcov.pipeline import scan, write_reports

PUBLISHED = {"speech": 0.6895, "en": 0.454, "None": 0.297, "Music": 0.0136}

# (quantity, tolerance in share units); music is reported but not checked
TOLERANCES = {
    "builtin": {"en": 0.05, "None": 0.02},
    "plugin": {"speech": 0.01, "en": 0.01, "None": 0.01},
}


def headline(report) -> dict:
    return {
        "speech": report.speech_share,
        "en": report.total.get("en", 0.0),
        "None": report.total.get("None", 0.0),
        "Music": report.total.get("Music", 0.0),
    }


def check(report, kind: str) -> list:
    """(quantity, measured, published, tolerance, ok) per checked quantity."""
    got = headline(report)
    return [(q, got[q], PUBLISHED[q], tol, abs(got[q] - PUBLISHED[q]) <= tol)
            for q, tol in TOLERANCES[kind].items()]


def run(inputs, durations, shards, detector, workers, out=None):
    config = RunConfig(inputs=tuple(inputs), durations=durations, shards=shards,
                       detector=detector, workers=workers)
    report, summary = scan(config)
    if report is None:
        raise SystemExit("no file could be processed")
    if out:
        write_reports(report, Path(out), config.formats)
    return report, summary


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("inputs", nargs="+", type=Path)
    ap.add_argument("--durations", type=Path, required=True)
    ap.add_argument("--shards", type=Path)
    ap.add_argument("--detector", action="append", default=None,
                    help="builtin, lingua or module:factory (repeatable; default builtin)")
    ap.add_argument("--workers", type=int, default=RunConfig().workers)
    ap.add_argument("--out", type=Path, help="write full reports under OUT/<detector>/")
    args = ap.parse_args(argv)

    failed = False
    for det in args.detector or ["builtin"]:
        out = args.out / det.replace(":", "_") if args.out else None
        report, summary = run(args.inputs, args.durations, args.shards, det, args.workers, out)
        kind = "builtin" if det == "builtin" else "plugin"
        print(f"[{det}] files {summary.files_processed} ok / {summary.files_failed} failed")
        for q, value in headline(report).items():
            print(f"  {q:7s} {100 * value:6.2f}%  (published {100 * PUBLISHED[q]:.2f}%)")
        for q, got, want, tol, ok in check(report, kind):
            failed |= not ok
            print(f"  {'PASS' if ok else 'FAIL'} {q}: |{100 * got:.2f} - {100 * want:.2f}| <= {100 * tol:.0f} points")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
