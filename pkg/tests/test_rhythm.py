import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_lyrics
from melodist.errors import CapacityExceeded, UnsupportedMeter
from melodist.planning import setup_score
from melodist.rhythm import (
    LyricSyllable,
    beat_grid,
    beat_strength,
    build_measure_rhythm,
    construct_rhythmic_score,
    measure_capacity,
    phrase_syllables,
    strong_beat_positions,
)
from melodist.theory import FOUR_FOUR, THREE_FOUR, TimeSignature


def _syllable(text, keyword=True, stressed=True, phrase=0):
    return LyricSyllable(text, text, stressed, keyword, phrase)


def _rhythmic_score(text, seed=0):
    plan, lp, dw = setup_score(text, None, seed)
    return construct_rhythmic_score(plan, lp, dw), plan, lp, dw


class TestStrongBeats:
    def test_common_time(self):
        assert strong_beat_positions(FOUR_FOUR) == (Fraction(0), Fraction(2))

    def test_waltz(self):
        assert strong_beat_positions(THREE_FOUR) == (Fraction(0),)

    def test_unsupported_meter(self):
        with pytest.raises(UnsupportedMeter):
            TimeSignature(5, 4)

    def test_grid_strengths(self):
        grid = beat_grid(FOUR_FOUR)
        strengths = {str(onset): s for onset, s in grid.slots}
        assert strengths["0"] == "strong" and strengths["2"] == "strong"
        assert strengths["1"] == "weak" and strengths["3"] == "weak"
        assert strengths["1/2"] == "off" and strengths["7/2"] == "off"

    def test_beat_strength_waltz(self):
        assert beat_strength(THREE_FOUR, Fraction(0)) == "strong"
        assert beat_strength(THREE_FOUR, Fraction(2)) == "weak"
        assert beat_strength(THREE_FOUR, Fraction(1, 2)) == "off"


class TestBuildMeasureRhythm:
    def test_birds_measure_trace(self):
        # birds(K) are fly(K)-ing into one 4/4 measure: keywords anchor the
        # two strong beats and the others fill beats 2 and 4.
        queue = [
            _syllable("birds"),
            _syllable("are", keyword=False, stressed=False),
            LyricSyllable("fly", "flying", True, True, 0, 0, 2),
            LyricSyllable("ing", "flying", False, True, 0, 1, 2),
        ]
        events = build_measure_rhythm(queue, beat_grid(FOUR_FOUR), True)
        assert [(e.onset, e.syllable) for e in events] == [
            (Fraction(0), "birds"),
            (Fraction(1), "are"),
            (Fraction(2), "fly"),
            (Fraction(3), "ing"),
        ]
        assert events[-1].duration == Fraction(1)  # extends to the measure end

    def test_single_keyword_waltz_final(self):
        events = build_measure_rhythm([_syllable("go")], beat_grid(THREE_FOUR), True)
        assert len(events) == 1
        assert events[0].onset == Fraction(0)
        assert events[0].duration == Fraction(3)

    def test_empty_queue_is_full_rest(self):
        assert build_measure_rhythm([], beat_grid(FOUR_FOUR), True) == []

    def test_capacity_exceeded(self):
        queue = [_syllable(f"s{i}", keyword=False, stressed=False) for i in range(9)]
        with pytest.raises(CapacityExceeded):
            build_measure_rhythm(queue, beat_grid(FOUR_FOUR), False)

    def test_filler_before_keyword_leaves_strong_beat(self):
        # the sky: "sky" anchors a strong beat (2), "the" fills beat 1.
        queue = [
            _syllable("the", keyword=False, stressed=False),
            _syllable("sky"),
        ]
        events = build_measure_rhythm(queue, beat_grid(FOUR_FOUR), True)
        assert events[0].onset == Fraction(0)
        assert events[1].onset == Fraction(2)
        assert events[1].duration == Fraction(2)

    def test_eighth_grid_when_crowded(self):
        queue = [
            _syllable(f"s{i}", keyword=(i == 0), stressed=(i == 0)) for i in range(8)
        ]
        events = build_measure_rhythm(queue, beat_grid(FOUR_FOUR), False)
        assert [e.onset for e in events] == [Fraction(k, 2) for k in range(8)]

    def test_inner_duration_capped_at_half_note(self):
        queue = [_syllable("lone", keyword=False, stressed=False)]
        events = build_measure_rhythm(queue, beat_grid(FOUR_FOUR), False)
        assert events[0].duration == Fraction(2)


class TestConstructRhythmicScore:
    def test_birds_two_phrases_two_measures(self):
        rs, plan, lp, dw = _rhythmic_score("Birds are flying, in the sky.")
        assert plan.phrase_measure_spans == (1, 1)
        assert len(rs.measures) == 2
        assert {e.phrase_index for e in rs.measures[0]} == {0}
        assert {e.phrase_index for e in rs.measures[1]} == {1}

    def test_one_word_lyric(self):
        rs, plan, _, _ = _rhythmic_score("Hello")
        assert len(rs.measures) == 1
        assert [e.syllable for e in rs.events()] == ["hel", "lo"]

    def test_flattened_syllables_match_input(self):
        rs, plan, lp, dw = _rhythmic_score("Golden sunshine fills the meadow, little sparrows sing.")
        expected = [
            s.syllable
            for p, phrase in enumerate(lp)
            for s in phrase_syllables(phrase, dw, p)
        ]
        assert rs.syllables() == expected

    def test_keyword_alignment_by_construction(self):
        # Two keywords per 4/4 measure is exactly the strong-beat budget.
        rs, plan, lp, dw = _rhythmic_score("Birds are flying, in the sky.")
        strong = set(strong_beat_positions(plan.ts))
        for event in rs.events():
            if event.is_keyword_stress:
                assert event.onset in strong


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_rhythm_invariants_random_lyrics(seed):
    rng = random.Random(seed)
    text = random_lyrics(rng)
    rs, plan, lp, dw = _rhythmic_score(text, seed=seed)

    beats = Fraction(plan.ts.beats_per_measure)
    assert len(rs.measures) == plan.measure_count
    for measure in rs.measures:
        position = Fraction(0)
        for event in measure:
            # Onset-sorted, non-overlapping, never crossing the barline.
            assert event.onset >= position
            assert event.duration > 0
            assert event.onset + event.duration <= beats
            position = event.onset + event.duration
        occupied = sum((e.duration for e in measure), Fraction(0))
        gaps = beats - occupied
        assert gaps >= 0  # rests fill the remainder exactly by construction

    expected = [
        s.syllable
        for p, phrase in enumerate(lp)
        for s in phrase_syllables(phrase, dw, p)
    ]
    assert rs.syllables() == expected

    # A measure never holds more syllables than it has slots.
    capacity = measure_capacity(plan.ts)
    assert all(len(m) <= capacity for m in rs.measures)
