import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from transcov.ingest import Cue
from transcov.music import (
    MusicConfig,
    MusicTermList,
    TermListError,
    is_music,
    normalize_for_matching,
    read_term_lines,
    residual_letter_count,
)

DEFAULT = MusicConfig()


@pytest.mark.parametrize(
    "text,expected",
    [("[Music]", "music"), ("  MUSIC  ", "music"), ("(интригующая музыка)", "интригующая музыка"),
     ("a \t  b", "a b")],
)
def test_normalize(text, expected):
    assert normalize_for_matching(text) == expected


@pytest.mark.parametrize("text,expected", [("music", 0), ("music music", 0), ("the music is loud", 9)])
def test_residual_letter_count(text, expected):
    assert residual_letter_count(text, DEFAULT.terms) == expected


@pytest.mark.parametrize(
    "text,expected",
    [
        ("Music", True),
        ("[Music]", True),
        ("♪ Music ♪", True),
        ("интригующая музыка", True),
        ("позитивающая музыка", True),
        ("The music is loud tonight", False),
        ("Hello everyone", False),
    ],
)
def test_is_music(text, expected):
    assert is_music(Cue("v", 0, 0, 1000, text), DEFAULT) is expected


def test_default_list_contents():
    terms = MusicTermList.default().terms
    for t in ("music", "интригующая музыка", "позитивающая музыка"):
        assert t in terms
    assert len(set(terms)) == len(terms)


def test_term_list_file(tmp_path):
    p = tmp_path / "terms.txt"
    p.write_bytes("# comment\n\nMusic\nMUSIC\n[Applause music]\n".encode())
    terms = MusicTermList.load(p)
    assert terms.terms == ("applause music", "music")


def test_term_list_bad_utf8_reports_line():
    with pytest.raises(TermListError) as exc:
        read_term_lines(b"music\n# ok\nbad \xff\n")
    assert exc.value.line == 3


def test_residual_threshold_must_stay_below_half():
    with pytest.raises(ValueError):
        MusicConfig(MusicTermList.default(), 0.5)


words = st.sampled_from(["music", "the", "loud", "la", "musica", "zz", "интригующая", "музыка", "a"])
sentences = st.lists(words, min_size=1, max_size=6).map(" ".join)


@given(sentences, st.lists(st.text("abcmusiz", min_size=1, max_size=6), max_size=4),
       st.text("abcmusiz", min_size=1, max_size=6))
def test_adding_a_term_never_unflags_music(text, base, extra):
    before = MusicConfig(MusicTermList.from_terms(base + ["music"]), 0.2)
    after = MusicConfig(MusicTermList.from_terms(base + ["music", extra]), 0.2)
    if is_music(text, before):
        assert is_music(text, after)


@given(sentences, st.sampled_from(["[{}]", "({})", "  {}!!", "{}...", "- {} -"]),
       st.sampled_from([str.upper, str.lower, str.title, lambda s: s]))
def test_invariant_under_case_and_punctuation(text, wrap, case):
    variant = wrap.format(case(text).replace(" ", "   "))
    assert is_music(variant, DEFAULT) == is_music(text, DEFAULT)


@given(st.text(max_size=30))
def test_no_term_no_music(text):
    config = MusicConfig(MusicTermList.from_terms(["qqqq"]), 0.49)
    assume("qqqq" not in normalize_for_matching(text))
    assert not is_music(text, config)
