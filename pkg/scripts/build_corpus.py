"""Build the language-id training corpus and held-out evaluation set.

Text comes from the gettext catalogs shipped inside a few large, permissively
licensed Python distributions (Django, Sphinx, Plone, Wagtail). Translated
``msgstr`` values give natural sentences for each shipped language, and the
English ``msgid`` values give the English side. The distributions are fetched
with ``pip download`` into a cache directory and read straight from the wheels.

Output (deterministic for pinned wheel versions):

    data/corpus/<lang>.txt          training text, one string per line
    tests/data/heldout/<lang>.txt   held-out sentences (>= 30 chars), one per line

    python scripts/build_corpus.py --cache /tmp/wheels
"""

import argparse
import hashlib
import html
import re
import subprocess
import sys
import zipfile
from collections import defaultdict
from pathlib import Path

import polib

ROOT = Path(__file__).resolve().parents[1]
WHEELS = ["django==5.2.18", "sphinx==8.1.3", "plone.app.locales==7.0.4", "wagtail==8.0"]
LANGS = ["bg", "de", "en", "es", "fr", "it", "nl", "pt", "ru"]
HELDOUT_PER_LANG = 300
HELDOUT_MIN_CHARS = 30

_LOCALE = re.compile(r"/([a-z]{2})(?:[_-][A-Za-z]{2,4})?/LC_MESSAGES/[^/]+\.po$")
_NOISE = [
    re.compile(r"%\([^)]*\)[-#0 +]*\d*(?:\.\d+)?[a-zA-Z]"),  # %(name)s
    re.compile(r"%[-#0 +]*\d*(?:\.\d+)?[sdifrxXeEgGc%]"),
    re.compile(r"\$\{[^}]*\}"),
    re.compile(r"\{[^}]*\}"),
    re.compile(r"<[^>]*>"),
    re.compile(r"https?://\S+|\S+@\S+"),
    re.compile(r"`+|\*\*?|\|"),
]
_SPACES = re.compile(r"\s+")


def clean(s: str) -> str:
    s = html.unescape(s)
    for pat in _NOISE:
        s = pat.sub(" ", s)
    return _SPACES.sub(" ", s).strip()


def letters(s: str) -> int:
    return sum(ch.isalpha() for ch in s)


def fetch(cache: Path) -> list:
    cache.mkdir(parents=True, exist_ok=True)
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "--timeout", "120", "-d", str(cache), *WHEELS],
        check=True,
    )
    return sorted(cache.glob("*.whl"))


def collect(wheels) -> dict:
    texts = defaultdict(set)
    for whl in wheels:
        with zipfile.ZipFile(whl) as zf:
            for name in sorted(zf.namelist()):
                m = _LOCALE.search(name)
                if not m or m.group(1) not in LANGS:
                    continue
                lang = m.group(1)
                po = polib.pofile(zf.read(name).decode("utf-8", errors="replace"))
                for entry in po.translated_entries():
                    if entry.obsolete or "fuzzy" in entry.flags:
                        continue
                    src = clean(entry.msgid)
                    if letters(src) >= 10:
                        texts["en"].add(src)
                    if lang == "en":
                        continue
                    dst = clean(entry.msgstr or entry.msgstr_plural.get(0, ""))
                    if letters(dst) >= 10 and dst != src:
                        texts[lang].add(dst)
    return texts


def split(strings):
    ordered = sorted(strings, key=lambda s: hashlib.sha1(s.encode()).hexdigest())
    heldout, train = [], []
    for s in ordered:
        if len(heldout) < HELDOUT_PER_LANG and len(s) >= HELDOUT_MIN_CHARS and letters(s) >= 20:
            heldout.append(s)
        else:
            train.append(s)
    return train, heldout


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--cache", type=Path, default=Path("/tmp/transcov-wheels"))
    args = ap.parse_args()

    texts = collect(fetch(args.cache))
    (ROOT / "data" / "corpus").mkdir(parents=True, exist_ok=True)
    (ROOT / "tests" / "data" / "heldout").mkdir(parents=True, exist_ok=True)
    for lang in LANGS:
        train, heldout = split(texts[lang])
        (ROOT / "data" / "corpus" / f"{lang}.txt").write_text("\n".join(train) + "\n", encoding="utf-8")
        (ROOT / "tests" / "data" / "heldout" / f"{lang}.txt").write_text("\n".join(heldout) + "\n", encoding="utf-8")
        print(f"{lang}: {len(train)} training strings ({sum(map(len, train))} chars), {len(heldout)} held out")


if __name__ == "__main__":
    main()
