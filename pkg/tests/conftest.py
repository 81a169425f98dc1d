"""Shared fixtures and generators for the test suite."""

from __future__ import annotations

import random

import pytest

from melodist.pipeline import compose
from melodist.theory import KEY_CATALOG

# Mixed pool: lexicon words, function words, and words that exercise the
# rule-based syllabifier fallback.
WORD_POOL = (
    "birds", "are", "flying", "in", "the", "sky", "little", "star", "twinkle",
    "sunshine", "meadow", "river", "golden", "sparrows", "sing", "happy",
    "dancing", "under", "willow", "tree", "moon", "night", "dream", "softly",
    "we", "walk", "together", "morning", "light", "over", "mountain", "valley",
    "rain", "falls", "gently", "on", "my", "window", "lonely", "shadows",
    "grow", "and", "children", "laughing", "play", "beautiful", "melody",
    "whisper", "secret", "stories", "of", "summer", "winter", "snowflakes",
    "tumble", "candles", "glow", "a", "boat", "sails", "slowly", "home",
    "grasshopper", "jumps", "puddle", "splashing", "rainbow", "colors",
)

PUNCTUATION = (", ", ". ", "!\n", "?\n", ";\n", ".\n")


def random_lyrics(rng: random.Random, min_phrases: int = 1, max_phrases: int = 5) -> str:
    """Plausible multi-phrase lyric text drawn from the word pool."""
    phrases = []
    for _ in range(rng.randint(min_phrases, max_phrases)):
        words = [rng.choice(WORD_POOL) for _ in range(rng.randint(1, 8))]
        phrases.append(" ".join(words))
    text = ""
    for phrase in phrases:
        text += phrase + rng.choice(PUNCTUATION)
    return text.strip()


@pytest.fixture
def lyric_rng() -> random.Random:
    return random.Random(20240601)


@pytest.fixture
def birds_result():
    return compose("Birds are flying, in the sky.", key="D major", seed=7)


@pytest.fixture
def corpus_keys():
    return KEY_CATALOG
