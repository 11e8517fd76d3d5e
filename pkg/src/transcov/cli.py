"""Command line interface: ``transcov scan``, ``transcov validate``, ``transcov --version``."""

from __future__ import annotations

import argparse
import logging
import sys
import tempfile
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config import ConfigError, ManifestError, config_from_mapping, load_config, validate_config
from .langid import SHIPPED_LANGUAGES, profiles_version
from .pipeline import scan, write_reports
from .reporting import share_table_text
from .unicode_scripts import UNICODE_VERSION

log = logging.getLogger("transcov")

EXIT_OK, EXIT_USAGE, EXIT_FILE_FAILURES, EXIT_INTERRUPTED = 0, 1, 2, 130


def version_string() -> str:
    return (f"transcov {__version__} (Unicode {UNICODE_VERSION}; "
            f"profiles {profiles_version()}: {','.join(SHIPPED_LANGUAGES)})")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="transcov", description=__doc__)
    ap.add_argument("--version", action="version", version=version_string())
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scan", help="analyze subtitle files and write coverage reports")
    s.add_argument("inputs", nargs="*", help="subtitle files or directories (searched recursively)")
    s.add_argument("--config", type=Path, help="JSON config file; flags override its values")
    s.add_argument("--durations", help="CSV manifest with columns video_id,duration_ms")
    s.add_argument("--shards", help="CSV manifest with columns video_id,shard")
    s.add_argument("--terms", help="music term list (UTF-8, one term per line)")
    s.add_argument("--min-chars", type=int)
    s.add_argument("--min-duration-ms", type=int)
    s.add_argument("--min-letter-fraction", type=float)
    s.add_argument("--max-residual-fraction", type=float)
    s.add_argument("--languages", help="comma-separated ISO 639-1 codes for the built-in detector")
    s.add_argument("--min-confidence-margin", type=float)
    s.add_argument("--min-detect-chars", type=int)
    s.add_argument("--detector", help="builtin (default), lingua, or package.module:factory")
    s.add_argument("--workers", type=int)
    s.add_argument("--out", help="output directory")
    s.add_argument("--format", help="comma-separated: json,csv-table,csv-histogram,text-table")
    s.add_argument("--top-k", type=int)
    s.add_argument("-q", "--quiet", action="store_true", help="only log errors")

    v = sub.add_parser("validate", help="check a config file and the files it refers to")
    v.add_argument("config", type=Path)
    return ap


def _flag_values(args: argparse.Namespace) -> dict:
    keys = ["durations", "shards", "terms", "min_chars", "min_duration_ms", "min_letter_fraction",
            "max_residual_fraction", "languages", "min_confidence_margin", "min_detect_chars",
            "detector", "workers", "out", "format", "top_k"]
    values = {k: getattr(args, k) for k in keys}
    values["inputs"] = args.inputs or None
    return values


def _check_writable(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryFile(dir=out):
        pass


def cmd_scan(args: argparse.Namespace) -> int:
    try:
        base = load_config(args.config) if args.config else None
        config = config_from_mapping(_flag_values(args), base)
    except (ConfigError, ManifestError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    if not config.inputs:
        log.error("no input paths given")
        return EXIT_USAGE
    try:
        _check_writable(config.out)
    except OSError as exc:
        log.error("output directory %s is not writable: %s", config.out, exc)
        return EXIT_USAGE

    try:
        report, summary = scan(config)
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (ManifestError, ConfigError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except KeyboardInterrupt:
        (config.out / "PARTIAL").write_text("run interrupted before completion\n", encoding="utf-8")
        log.error("interrupted; partial-run marker written to %s", config.out / "PARTIAL")
        return EXIT_INTERRUPTED

    log.info(
        "files: %d processed, %d failed; cues: %d total = %d discarded %s + %d music + %d speech; %d ms",
        summary.files_processed, summary.files_failed, summary.cues_total, summary.discarded_total,
        summary.cues_discarded, summary.cues_music, summary.cues_speech, summary.wall_time_ms,
    )
    if report is None:
        log.error("no file could be processed; no report written")
        return EXIT_FILE_FAILURES
    try:
        written = write_reports(report, config.out, config.formats, config.top_k)
    except OSError as exc:
        log.error("cannot write reports: %s", exc)
        return EXIT_USAGE
    for path in written:
        log.info("wrote %s", path)
    if "text-table" in config.formats:
        sys.stdout.write(share_table_text(report, config.top_k))
    return EXIT_FILE_FAILURES if summary.files_failed else EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    problems = validate_config(args.config)
    for p in problems:
        print(p, file=sys.stderr)
    if problems:
        return EXIT_USAGE
    print("ok")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if getattr(args, "quiet", False) else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.command == "scan":
        return cmd_scan(args)
    return cmd_validate(args)


if __name__ == "__main__":
    sys.exit(main())
