"""Regenerate ``src/transcov/_script_table.py`` from the UCD Scripts.txt data.

The table is read from the copy bundled with fontTools so that no network
access is needed; the Unicode version it carries is pinned into the output.

    python scripts/gen_script_table.py
"""

import inspect
import re
from pathlib import Path

from fontTools.unicodedata import Scripts

OUT = Path(__file__).resolve().parents[1] / "src" / "transcov" / "_script_table.py"


def unicode_version() -> str:
    m = re.search(r"Scripts-(\d+\.\d+\.\d+)\.txt", inspect.getsource(Scripts))
    if not m:
        raise SystemExit("cannot determine Unicode version of fontTools script data")
    return m.group(1)


def main() -> None:
    names = dict(Scripts.NAMES)
    names.setdefault("Zzzz", "Unknown")
    # merge adjacent ranges with the same value
    starts, values = [], []
    for start, code in zip(Scripts.RANGES, Scripts.VALUES):
        name = names[code]
        if values and values[-1] == name:
            continue
        starts.append(start)
        values.append(name)

    lines = [
        "# Generated by scripts/gen_script_table.py -- do not edit.",
        f"# Source: UCD Scripts-{unicode_version()}.txt",
        "",
        f'UNICODE_VERSION = "{unicode_version()}"',
        "",
        "STARTS = (",
    ]
    for i in range(0, len(starts), 8):
        lines.append("    " + ", ".join(f"0x{s:05X}" for s in starts[i : i + 8]) + ",")
    lines.append(")")
    lines.append("")
    pool = sorted(set(values))
    lines.append("NAMES = (")
    for n in pool:
        lines.append(f'    "{n}",')
    lines.append(")")
    lines.append("")
    lines.append("# index into NAMES for each entry of STARTS")
    lines.append("INDEX = (")
    idx = [pool.index(v) for v in values]
    for i in range(0, len(idx), 20):
        lines.append("    " + ", ".join(str(x) for x in idx[i : i + 20]) + ",")
    lines.append(")")
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({len(starts)} ranges, Unicode {unicode_version()})")


if __name__ == "__main__":
    main()
