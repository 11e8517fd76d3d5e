import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tests.oracles import coverage_by_millisecond
from tests.strategies import accumulators, make_cues, videos
from transcov.cleaning import DiscardReason
from transcov.coverage import (
    HIST_BINS,
    MUSIC,
    ClassifiedCue,
    CoverageAccumulator,
    Discarded,
    Span,
    Speech,
    accumulator_from_report,
    bin_labels,
    finalize_report,
    fraction_bin,
    merge_reports,
    partition_timeline,
    video_stats,
)
from transcov.ingest import Cue
from transcov.langid import Language

EN = Speech(Language("en"))


def cc(start, end, cls, ordinal=0):
    return ClassifiedCue(Cue("v", ordinal, start, end, "text"), cls)


def test_overlapping_same_label_unions():
    cues = [cc(0, 10_000, EN, 0), cc(5_000, 15_000, EN, 1)]
    assert partition_timeline(cues, 100_000) == [Span(0, 15_000, "en"), Span(15_000, 100_000, "None")]
    assert video_stats(cues, 100_000).covered_ms == {"en": 15_000}


def test_no_cues():
    assert partition_timeline([], 60_000) == [Span(0, 60_000, "None")]


def test_truncate_to_earlier():
    cues = [cc(5_000, 12_000, MUSIC, 1), cc(0, 10_000, EN, 0)]
    assert partition_timeline(cues, 20_000) == [
        Span(0, 10_000, "en"), Span(10_000, 12_000, "Music"), Span(12_000, 20_000, "None")]
    s = video_stats(cues, 20_000)
    assert (s.covered_ms, s.music_ms, s.none_ms) == ({"en": 10_000}, 2_000, 8_000)


def test_same_start_earlier_ordinal_wins():
    cues = [cc(0, 5_000, MUSIC, 1), cc(0, 3_000, EN, 0)]
    assert partition_timeline(cues, 5_000) == [Span(0, 3_000, "en"), Span(3_000, 5_000, "Music")]


def test_all_discarded():
    cues = [cc(0, 1_000, Discarded(DiscardReason.TOO_SHORT), i) for i in range(3)]
    s = video_stats(cues, 30_000)
    assert s.none_ms == 30_000 and s.covered_ms == {} and s.discarded_count == 3


def test_full_coverage():
    s = video_stats([cc(0, 42_000, EN)], 42_000)
    assert s.speech_fraction == 1.0
    assert fraction_bin(s.speech_ms, s.duration_ms) == HIST_BINS - 1


def test_cue_past_duration_is_clamped(caplog):
    spans = partition_timeline([cc(0, 5_000, EN), cc(8_000, 30_000, MUSIC, 1), cc(40_000, 50_000, EN, 2)], 10_000)
    assert spans[-1] == Span(8_000, 10_000, "Music")
    assert sum(s.length for s in spans) == 10_000
    assert "clamped" in caplog.text


@pytest.mark.parametrize("duration", [0, -5])
def test_non_positive_duration_raises(duration):
    with pytest.raises(ValueError):
        partition_timeline([], duration)


def test_fraction_bins():
    assert fraction_bin(0, 100) == 0
    assert fraction_bin(1, 1000) == 1  # 0.1% lands in the 0-1 bin, not exact_0
    assert fraction_bin(999, 1000) == 100
    assert fraction_bin(5, 10) == 51
    assert fraction_bin(10, 10) == 101
    labels = bin_labels()
    assert len(labels) == HIST_BINS and labels[0] == "exact_0" and labels[51] == "50-51"


@settings(max_examples=200, deadline=None)
@given(videos(max_cues=30, max_duration=3_000))
def test_partition_matches_oracle(video):
    cues, duration = video
    spans = partition_timeline(cues, duration)
    got = {}
    for s in spans:
        got[s.label] = got.get(s.label, 0) + s.length
    oracle = coverage_by_millisecond([(c.cue.start, c.cue.end, c.cue.ordinal, c.key) for c in cues], duration)
    assert got == {k: v for k, v in oracle.items() if v}
    # tiling: contiguous, disjoint, adjacent labels differ
    assert spans[0].start == 0 and spans[-1].end == duration
    for a, b in zip(spans, spans[1:]):
        assert a.end == b.start and a.label != b.label and a.length > 0


@given(videos(max_cues=20, max_duration=20_000))
def test_stats_partition_invariant(video):
    cues, duration = video
    s = video_stats(cues, duration)
    assert s.speech_ms + s.music_ms + s.none_ms == duration


@given(videos(max_cues=20, max_duration=20_000), st.randoms())
def test_cue_order_in_list_is_irrelevant(video, rnd):
    cues, duration = video
    shuffled = list(cues)
    rnd.shuffle(shuffled)
    assert partition_timeline(shuffled, duration) == partition_timeline(cues, duration)


# -- accumulators ------------------------------------------------------------------

@given(accumulators())
def test_merge_identity(a):
    assert merge_reports(a, CoverageAccumulator()) == a
    assert merge_reports(CoverageAccumulator(), a) == a


@given(accumulators(), accumulators())
def test_merge_commutative(a, b):
    assert merge_reports(a, b) == merge_reports(b, a)


@given(accumulators(), accumulators(), accumulators())
def test_merge_associative(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(st.lists(videos(max_cues=6, max_duration=4_000), min_size=3, max_size=3))
def test_any_merge_order_gives_same_report(vids):
    accs = [CoverageAccumulator.from_video(video_stats(c, d, "V3C2")) for c, d in vids]
    reports = set()
    for perm in itertools.permutations(accs):
        total = CoverageAccumulator()
        for a in perm:
            total = total + a
        reports.add(repr(finalize_report(total)))
    assert len(reports) == 1


def test_finalize_single_full_video():
    rep = finalize_report(CoverageAccumulator.from_video(video_stats([cc(0, 9_000, EN)], 9_000, "V3C1")))
    assert rep.total == {"en": 1.0}
    assert rep.speech_fraction_hist[-1] == 1 and sum(rep.speech_fraction_hist) == 1
    assert rep.music_fraction_hist == (0,) * HIST_BINS


def test_finalize_two_videos_symmetry():
    a = CoverageAccumulator.from_video(video_stats([cc(0, 10_000, EN)], 10_000))
    b = CoverageAccumulator.from_video(video_stats([], 10_000))
    assert finalize_report(a + b).total == {"en": 0.5, "None": 0.5}


def test_finalize_zero_duration_raises():
    with pytest.raises(ValueError):
        finalize_report(CoverageAccumulator())


@given(accumulators().filter(lambda a: a.total_duration_ms > 0))
def test_shares_sum_to_one(acc):
    rep = finalize_report(acc)
    assert math.isclose(sum(rep.total.values()), 1.0, abs_tol=1e-9)
    for shares in rep.per_shard.values():
        assert math.isclose(sum(shares.values()), 1.0, abs_tol=1e-9)
    speech = sum(v for k, v in rep.total.items() if k not in ("None", "Music"))
    assert math.isclose(rep.speech_share, speech, abs_tol=1e-9)
    assert accumulator_from_report(rep) == acc


def test_make_cues_helper_labels():
    cues = make_cues([(0, 10, 0), (0, 10, 5)])
    assert [c.key for c in cues] == ["en", None]
