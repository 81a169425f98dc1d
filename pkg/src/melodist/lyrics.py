"""Lyric analysis: phrase segmentation, syllabification, keyword and
sentiment detection.

Everything here is deterministic and offline. Syllabification consults the
bundled pronunciation lexicon first and falls back to orthographic rules,
so any alphabetic token yields at least one syllable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import EmptyLyrics

PhraseList = list[list[str]]

STRESSED = "stressed"
UNSTRESSED = "unstressed"

# Dead zone around zero for the neutral sentiment label.
SENTIMENT_THRESHOLD = 0.05

_TOKEN_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*", re.UNICODE)
_PHRASE_SPLIT_RE = re.compile(r"[.!?,;:\n]+")

_VOWELS = frozenset("aeiou")

# Closed list of English function words: determiners, pronouns, prepositions,
# conjunctions, auxiliaries/modals and their contractions. Tokens outside this
# list count as content words (the "keywords" targeted at strong beats).
FUNCTION_WORDS = frozenset("""
a an the this that these those such what which who whom whose
i you he she it we they me him her us them
my your his its our their mine yours hers ours theirs
myself yourself himself herself itself ourselves yourselves themselves
one some any all both each either neither none few many much most several
someone anyone everyone somebody anybody everybody nobody
something anything everything nothing
am is are was were be been being
have has had having do does did doing
will would shall should can could may might must ought
and or but nor so yet for if while because although though since
unless until when whenever where wherever whether once than as
in on at by to of with from into onto over under above below
between among through during without within along across behind beyond
near off out up down around about against toward towards upon per via
amid beside besides despite except inside outside underneath unto till
not no there
don't doesn't didn't can't won't wouldn't couldn't shouldn't mustn't
isn't aren't wasn't weren't hasn't haven't hadn't ain't
i'm you're we're they're he's she's it's that's there's what's who's
i've you've we've they've i'll you'll he'll she'll we'll they'll it'll
i'd you'd he'd she'd we'd they'd let's o'er
""".split())


@dataclass(frozen=True)
class WordEntry:
    """Per-word analysis: keyword flag, syllables, and stress pattern."""

    word: str
    is_keyword: bool
    syllables: tuple[str, ...]
    stress: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.syllables:
            raise ValueError(f"word {self.word!r} has no syllables")
        if len(self.stress) != len(self.syllables):
            raise ValueError(f"stress/syllable length mismatch for {self.word!r}")


@dataclass(frozen=True)
class SentimentScore:
    valence: float

    @property
    def label(self) -> str:
        if self.valence > SENTIMENT_THRESHOLD:
            return "positive"
        if self.valence < -SENTIMENT_THRESHOLD:
            return "negative"
        return "neutral"


def _load_tsv(name: str) -> dict[str, tuple[str, ...]]:
    table: dict[str, tuple[str, ...]] = {}
    text = resources.files("melodist.data").joinpath(name).read_text("utf-8")
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        table[fields[0]] = tuple(fields[1:])
    return table


@lru_cache(maxsize=1)
def _syllable_lexicon() -> dict[str, tuple[tuple[str, ...], tuple[str, ...]]]:
    lexicon = {}
    for word, (hyphenation, digits) in _load_tsv("syllables.tsv").items():
        sylls = tuple(hyphenation.split("-"))
        stress = tuple(STRESSED if d == "1" else UNSTRESSED for d in digits)
        if len(sylls) != len(stress):
            raise ValueError(f"malformed lexicon entry for {word!r}")
        lexicon[word] = (sylls, stress)
    return lexicon


@lru_cache(maxsize=1)
def _sentiment_lexicon() -> dict[str, float]:
    return {w: float(v[0]) for w, v in _load_tsv("sentiment.tsv").items()}


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens; letters and internal apostrophes only.

    Hyphenated words split into separate tokens because hyphens are not
    part of the token pattern.
    """
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def segment_phrases(text: str) -> PhraseList:
    """Split lyrics into phrases at punctuation and line breaks.

    Raises EmptyLyrics when no word tokens remain.
    """
    phrases = [tokens for seg in _PHRASE_SPLIT_RE.split(text) if (tokens := tokenize(seg))]
    if not phrases:
        raise EmptyLyrics("lyrics contain no words")
    return phrases


def _vowel_groups(word: str) -> list[tuple[int, int]]:
    """Index ranges of vowel-letter groups; y counts after a consonant,
    u is swallowed by a preceding q."""
    groups: list[tuple[int, int]] = []
    start = None
    prev_is_vowel = False
    for i, ch in enumerate(word):
        is_vowel = ch in _VOWELS
        if ch == "y":
            is_vowel = i > 0 and not prev_is_vowel
        if ch == "u" and i > 0 and word[i - 1] == "q":
            is_vowel = False
        if is_vowel and start is None:
            start = i
        elif not is_vowel and start is not None:
            groups.append((start, i))
            start = None
        prev_is_vowel = is_vowel
    if start is not None:
        groups.append((start, len(word)))
    return groups


_KEEP_ES_BEFORE = ("s", "x", "z", "c", "g", "ch", "sh")
_SPLITLESS_DIGRAPHS = ("ch", "sh", "th", "ph", "wh", "ck", "gh", "qu")


def _is_consonant_le(word: str, last_start: int) -> bool:
    """True for final -le/-les preceded by a consonant ("little", "tables")."""
    return (
        word[last_start - 1] == "l"
        and last_start >= 2
        and word[last_start - 2] not in _VOWELS
        and word[last_start:] in ("e", "es")
    )


def _silence_final_e(word: str, groups: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Drop the trailing silent-e vowel group (plain -e, -es, -ed endings)."""
    if len(groups) < 2:
        return groups
    last_start, _ = groups[-1]
    tail = word[last_start:]
    if word[last_start] != "e" or _is_consonant_le(word, last_start):
        return groups
    before = word[last_start - 1]
    if tail == "e" and before not in _VOWELS:
        return groups[:-1]
    if tail == "es":
        if before in _KEEP_ES_BEFORE or word[last_start - 2:last_start] in _KEEP_ES_BEFORE:
            return groups
        return groups[:-1]
    if tail == "ed" and before not in ("t", "d"):
        return groups[:-1]
    return groups


def _rule_syllabify(word: str) -> tuple[str, ...]:
    """Orthographic fallback: split between vowel groups so that a single
    consonant opens the next syllable and clusters split after their first
    consonant (digraphs kept together, y/w diphthong letters kept left,
    the l of a consonant-le nucleus kept right)."""
    groups = _vowel_groups(word)
    if not groups:
        return (word,)
    groups = _silence_final_e(word, groups)
    if len(groups) == 1:
        return (word,)
    cuts: list[int] = []
    for (_, end_a), (start_b, _) in zip(groups, groups[1:]):
        gap = start_b - end_a
        # The l before a final -le nucleus belongs to that syllable's onset.
        if gap >= 2 and _is_consonant_le(word, start_b):
            gap -= 1
        if gap == 1:
            cut = end_a + 1 if word[end_a] in "yw" else end_a
        elif word[end_a:end_a + 2] in _SPLITLESS_DIGRAPHS:
            cut = end_a + 2 if gap > 2 else end_a
        else:
            cut = end_a + 1
        cuts.append(cut)
    pieces = []
    prev = 0
    for cut in cuts:
        pieces.append(word[prev:cut])
        prev = cut
    pieces.append(word[prev:])
    return tuple(p for p in pieces if p)


def syllabify(word: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Syllables and stress pattern for one token.

    Lexicon entries win; otherwise rule-based syllables with first-syllable
    stress (monosyllabic function words are unstressed, everything else
    carries one stress).
    """
    token = word.lower()
    hit = _syllable_lexicon().get(token)
    if hit is not None:
        return hit
    sylls = _rule_syllabify(token)
    if len(sylls) == 1:
        stress = (UNSTRESSED,) if token in FUNCTION_WORDS else (STRESSED,)
    else:
        stress = (STRESSED,) + (UNSTRESSED,) * (len(sylls) - 1)
    return sylls, stress


def detect_keyword(word: str, pos_context: tuple[str, ...] = ()) -> bool:
    """Content words (nouns, main verbs, adjectives, adverbs) are keywords;
    the closed function-word list is not. Context is accepted for signature
    stability but the decision is context-free."""
    del pos_context
    token = word.lower()
    return bool(token) and token not in FUNCTION_WORDS


def analyze_sentiment(text: str) -> SentimentScore:
    """Mean per-word valence over content words; unknown words count 0."""
    lexicon = _sentiment_lexicon()
    content = [t for t in tokenize(text) if detect_keyword(t)]
    if not content:
        return SentimentScore(0.0)
    total = sum(lexicon.get(t, 0.0) for t in content)
    return SentimentScore(total / len(content))


def build_word_dictionary(lp: PhraseList) -> dict[str, WordEntry]:
    """One WordEntry per distinct token in the phrase list."""
    entries: dict[str, WordEntry] = {}
    for phrase in lp:
        for token in phrase:
            if token in entries:
                continue
            sylls, stress = syllabify(token)
            is_keyword = detect_keyword(token)
            if is_keyword and STRESSED not in stress:
                stress = (STRESSED,) + stress[1:]
            entries[token] = WordEntry(token, is_keyword, sylls, stress)
    return entries
