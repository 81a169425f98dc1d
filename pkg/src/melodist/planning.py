"""Score setup: time signature, key signature, and measure counting.

The time signature comes from latent stress patterns in the lyrics, the key
signature mode from sentiment (or the user's explicit choice), and the
measure count from keyword density per phrase.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import UnknownKey
from .lyrics import (
    STRESSED,
    PhraseList,
    SentimentScore,
    WordEntry,
    analyze_sentiment,
    build_word_dictionary,
    segment_phrases,
)
from .rhythm import measure_capacity
from .theory import FOUR_FOUR, KEY_CATALOG, MAJOR, MINOR, THREE_FOUR, KeySignature, TimeSignature


@dataclass(frozen=True)
class ScorePlan:
    """Everything decided before rhythm construction starts."""

    ts: TimeSignature
    ks: KeySignature
    measure_count: int
    phrase_measure_spans: tuple[int, ...]
    sentiment: SentimentScore

    def __post_init__(self) -> None:
        if self.measure_count != sum(self.phrase_measure_spans):
            raise ValueError("measure_count must equal the sum of phrase spans")
        if any(span < 1 for span in self.phrase_measure_spans):
            raise ValueError("every phrase span must be at least 1")


def _flat_stress(lp: PhraseList, dw: dict[str, WordEntry]) -> list[bool]:
    return [
        s == STRESSED
        for phrase in lp
        for token in phrase
        for s in dw[token].stress
    ]


def _grid_score(stress: list[bool], period: int) -> float:
    """Best agreement, over phases, between observed stress and a grid that
    predicts a stress exactly every `period` syllables."""
    best = 0
    for phase in range(period):
        hits = sum(1 for i, s in enumerate(stress) if s == (i % period == phase))
        best = max(best, hits)
    return best / len(stress)


def determine_time_signature(lp: PhraseList, dw: dict[str, WordEntry]) -> TimeSignature:
    """4/4 when a duple stress grid fits at least as well as a triple one."""
    stress = _flat_stress(lp, dw)
    if len(stress) <= 2:
        return FOUR_FOUR
    return FOUR_FOUR if _grid_score(stress, 2) >= _grid_score(stress, 3) else THREE_FOUR


def determine_key_signature(
    sent: SentimentScore,
    user_choice: KeySignature | None = None,
    rng_seed: int = 0,
) -> KeySignature:
    """User choice wins; otherwise sentiment picks the mode (negative ->
    minor, else major) and the tonic is drawn uniformly from the catalog."""
    if user_choice is not None:
        if user_choice not in KEY_CATALOG:
            raise UnknownKey(f"key outside the supported catalog: {user_choice}")
        return user_choice
    mode = MINOR if sent.label == "negative" else MAJOR
    candidates = tuple(k for k in KEY_CATALOG if k.mode == mode)
    return random.Random(rng_seed).choice(candidates)


def determine_measure_count(
    dw: dict[str, WordEntry],
    lp: PhraseList,
    ts: TimeSignature,
) -> tuple[int, tuple[int, ...]]:
    """Per phrase: enough measures for its keywords at one strong beat each,
    raised if the syllables would not physically fit."""
    capacity = measure_capacity(ts)
    spans = []
    for phrase in lp:
        keywords = sum(1 for token in phrase if dw[token].is_keyword)
        syllables = sum(len(dw[token].syllables) for token in phrase)
        span = max(1, math.ceil(keywords / ts.accents_per_measure))
        span = max(span, math.ceil(syllables / capacity))
        spans.append(span)
    return sum(spans), tuple(spans)


def setup_score(
    text: str,
    user_key: KeySignature | None = None,
    seed: int = 0,
) -> tuple[ScorePlan, PhraseList, dict[str, WordEntry]]:
    """Full setup pass: phrases, word entries, sentiment, signatures, sizing."""
    lp = segment_phrases(text)
    dw = build_word_dictionary(lp)
    sent = analyze_sentiment(text)
    ts = determine_time_signature(lp, dw)
    ks = determine_key_signature(sent, user_key, seed)
    measure_count, spans = determine_measure_count(dw, lp, ts)
    return ScorePlan(ts, ks, measure_count, spans, sent), lp, dw
