import math

import pytest
from hypothesis import given, strategies as st

from melodist.errors import EmptyLyrics, UnknownKey
from melodist.lyrics import SentimentScore, build_word_dictionary, segment_phrases
from melodist.planning import (
    determine_key_signature,
    determine_measure_count,
    determine_time_signature,
    setup_score,
)
from melodist.rhythm import measure_capacity
from melodist.theory import (
    FOUR_FOUR,
    KEY_CATALOG,
    MAJOR,
    MINOR,
    THREE_FOUR,
    KeySignature,
    parse_key_name,
)


def _analyzed(text):
    lp = segment_phrases(text)
    return lp, build_word_dictionary(lp)


class TestTimeSignature:
    def test_alternating_stress_prefers_duple(self):
        # twin-kle twin-kle lit-tle star: S u S u S u S fits the duple grid
        # perfectly (score 1.0) and the triple grid at best 4/7.
        lp, dw = _analyzed("twinkle twinkle little star")
        assert determine_time_signature(lp, dw) == FOUR_FOUR

    def test_degenerate_input_defaults_to_duple(self):
        lp, dw = _analyzed("hello")
        assert determine_time_signature(lp, dw) == FOUR_FOUR

    def test_dominant_waltz_stress_prefers_triple(self):
        # mel-o-dy repeated gives S u u S u u ...: the triple grid matches
        # every syllable while the duple grid cannot exceed 2/3.
        lp, dw = _analyzed("melody melody melody melody")
        assert determine_time_signature(lp, dw) == THREE_FOUR


class TestKeySignature:
    def test_user_choice_wins_over_sentiment(self):
        key = parse_key_name("D major")
        negative = SentimentScore(-0.9)
        assert determine_key_signature(negative, key, 0) == key

    def test_positive_maps_to_major(self):
        for seed in range(10):
            key = determine_key_signature(SentimentScore(0.5), None, seed)
            assert key.mode == MAJOR
            assert key in KEY_CATALOG

    def test_negative_maps_to_minor(self):
        for seed in range(10):
            key = determine_key_signature(SentimentScore(-0.5), None, seed)
            assert key.mode == MINOR

    def test_neutral_maps_to_major(self):
        assert determine_key_signature(SentimentScore(0.0), None, 3).mode == MAJOR

    def test_outside_catalog_rejected(self):
        with pytest.raises(UnknownKey):
            determine_key_signature(SentimentScore(0.0), KeySignature(11, MAJOR), 0)

    @given(
        st.sampled_from(KEY_CATALOG),
        st.floats(min_value=-1, max_value=1, allow_nan=False),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_passthrough_for_any_sentiment(self, key, valence, seed):
        assert determine_key_signature(SentimentScore(valence), key, seed) == key


class TestMeasureCount:
    def test_four_keywords_two_accents(self):
        lp, dw = _analyzed("birds sing stars shine")
        assert sum(dw[t].is_keyword for t in lp[0]) == 4
        total, spans = determine_measure_count(dw, lp, FOUR_FOUR)
        assert spans == (2,)
        assert total == 2

    def test_one_keyword_waltz(self):
        lp, dw = _analyzed("the sky")
        total, spans = determine_measure_count(dw, lp, THREE_FOUR)
        assert spans == (1,)

    def test_zero_keywords_floor(self):
        lp, dw = _analyzed("the of and")
        total, spans = determine_measure_count(dw, lp, FOUR_FOUR)
        assert spans == (1,)

    def test_syllable_overflow_raises_span(self):
        # One keyword but twelve syllables cannot fit one 4/4 measure.
        lp, dw = _analyzed("the innumerable caterpillars of the untameable")
        total, spans = determine_measure_count(dw, lp, FOUR_FOUR)
        syllables = sum(len(dw[t].syllables) for t in lp[0])
        assert spans[0] >= math.ceil(syllables / measure_capacity(FOUR_FOUR))


class TestSetupScore:
    def test_birds_plan(self):
        plan, lp, dw = setup_score("Birds are flying in the sky.", None, 42)
        assert plan.ts in (FOUR_FOUR, THREE_FOUR)
        assert plan.measure_count >= 1
        assert plan.sentiment.label in ("positive", "negative", "neutral")
        assert plan.measure_count == sum(plan.phrase_measure_spans)

    def test_deterministic(self):
        first = setup_score("Birds are flying in the sky.", None, 42)
        second = setup_score("Birds are flying in the sky.", None, 42)
        assert first == second

    def test_empty_rejected(self):
        with pytest.raises(EmptyLyrics):
            setup_score("", None, 0)

    def test_measure_count_at_least_phrases(self, lyric_rng):
        from conftest import random_lyrics

        for _ in range(25):
            text = random_lyrics(lyric_rng)
            plan, lp, _ = setup_score(text, None, 1)
            assert plan.measure_count >= len(lp)
