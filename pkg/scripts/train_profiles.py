"""Train the shipped trigram profiles from data/corpus/ and report held-out accuracy.

    python scripts/train_profiles.py [--min-count 2]
"""

import argparse
from collections import Counter
from pathlib import Path

from transcov.langid import SHIPPED_LANGUAGES, DetectionConfig, TrigramDetector, train_profile

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "src" / "transcov" / "data" / "profiles"


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--min-count", type=int, default=2)
    ap.add_argument("--version", default="1")
    args = ap.parse_args()

    OUT.mkdir(parents=True, exist_ok=True)
    profiles = {}
    for lang in SHIPPED_LANGUAGES:
        with open(ROOT / "data" / "corpus" / f"{lang}.txt", encoding="utf-8") as fh:
            profiles[lang] = train_profile(fh, lang, min_count=args.min_count, version=args.version)
        (OUT / f"{lang}.tsv").write_text(profiles[lang].dumps(), encoding="utf-8")
        print(f"{lang}: {len(profiles[lang].trigram_weights)} trigrams")

    detector = TrigramDetector(profiles, DetectionConfig())
    total = correct = 0
    for lang in SHIPPED_LANGUAGES:
        lines = (ROOT / "tests" / "data" / "heldout" / f"{lang}.txt").read_text(encoding="utf-8").splitlines()
        got = Counter(detector.detect(s) for s in lines)
        total += len(lines)
        correct += got[lang]
        print(f"{lang}: {got[lang]}/{len(lines)}  confusions={dict(got - Counter({lang: got[lang]}))}")
    print(f"overall accuracy {correct / total:.4f}")


if __name__ == "__main__":
    main()
