import json

import pytest

from transcov.config import (
    ConfigError,
    ManifestError,
    RunConfig,
    config_from_mapping,
    load_config,
    load_durations,
    load_shards,
    validate_config,
)


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_flags_override_file(tmp_path):
    cfg_path = _write(tmp_path / "c.json", json.dumps({"min_chars": 4, "inputs": ["subs"], "workers": 3}))
    base = load_config(cfg_path)
    assert base.cleaning.min_chars == 4 and base.inputs == (tmp_path / "subs",)
    cfg = config_from_mapping({"min_chars": 8, "workers": None}, base)
    assert cfg.cleaning.min_chars == 8 and cfg.workers == 3


@pytest.mark.parametrize("values", [
    {"bogus": 1}, {"workers": 0}, {"min_chars": "many"}, {"format": "pdf"},
    {"languages": "EN"}, {"max_residual_fraction": 0.7}, {"min_letter_fraction": 2},
])
def test_bad_values(values):
    with pytest.raises(ConfigError):
        config_from_mapping(values)


def test_manifests(tmp_path):
    d = _write(tmp_path / "d.csv", "﻿video_id,duration_ms\nclips/a.mp4,1000\nb, 2000\n\n")
    assert load_durations(d) == {"clips/a.mp4": 1000, "a": 1000, "b": 2000}
    s = _write(tmp_path / "s.csv", "shard,video_id\nV3C2,a\n")
    assert load_shards(s) == {"a": "V3C2"}
    bad = _write(tmp_path / "bad.csv", "video_id,duration_ms\na,10\nb,-1\n")
    with pytest.raises(ManifestError) as exc:
        load_durations(bad)
    assert exc.value.line == 3
    with pytest.raises(ManifestError, match="V3C9"):
        load_shards(_write(tmp_path / "s2.csv", "video_id,shard\na,V3C9\n"))


def _valid_setup(tmp_path):
    (tmp_path / "subs").mkdir(exist_ok=True)
    _write(tmp_path / "dur.csv", "video_id,duration_ms\na,1000\n")
    _write(tmp_path / "terms.txt", "# comment\nmusic\n")
    return {"inputs": ["subs"], "durations": "dur.csv", "terms": "terms.txt", "languages": "en,de"}


def test_validate_ok(tmp_path):
    cfg = _write(tmp_path / "c.json", json.dumps(_valid_setup(tmp_path), indent=2))
    assert validate_config(cfg) == []


def test_validate_manifest_missing_column(tmp_path):
    values = _valid_setup(tmp_path)
    _write(tmp_path / "dur.csv", "video_id,length\na,1000\n")
    problems = validate_config(_write(tmp_path / "c.json", json.dumps(values)))
    assert len(problems) == 1 and "duration_ms" in problems[0] and "dur.csv:1" in problems[0]


def test_validate_term_list_bad_utf8_line(tmp_path):
    values = _valid_setup(tmp_path)
    (tmp_path / "terms.txt").write_bytes(b"music\n# ok\nm\xc3\xbcsik\nbad \xff\n")
    problems = validate_config(_write(tmp_path / "c.json", json.dumps(values)))
    assert len(problems) == 1 and f"{tmp_path / 'terms.txt'}:4:" in problems[0]


def test_validate_reports_key_lines_and_missing_profiles(tmp_path):
    values = _valid_setup(tmp_path)
    values["min_chars"] = "six"
    cfg = _write(tmp_path / "c.json", json.dumps(values, indent=2))
    problems = validate_config(cfg)
    assert len(problems) == 1 and problems[0].startswith(f"{cfg}:8:")
    values = _valid_setup(tmp_path)
    values["languages"] = "en,sv"
    problems = validate_config(_write(tmp_path / "c.json", json.dumps(values)))
    assert len(problems) == 1 and "'sv'" in problems[0]


def test_validate_syntax_error(tmp_path):
    cfg = _write(tmp_path / "c.json", '{\n  "min_chars": 6,\n}\n')
    problems = validate_config(cfg)
    assert len(problems) == 1 and f"{cfg}:3:" in problems[0]


def test_defaults():
    cfg = RunConfig()
    assert cfg.workers >= 1 and cfg.top_k == 10
    assert set(cfg.formats) == {"json", "csv-table", "csv-histogram", "text-table"}
