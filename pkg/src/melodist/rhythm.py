"""Rhythmic score construction: distribute each phrase over its measures and
place syllables so that keywords' stressed syllables land on strong beats.

All onsets and durations are Fractions of a quarter note, so measure sums are
exact. The finest slot resolution is an eighth note; a measure whose syllable
count fits the beat count uses the quarter-note grid instead, which is what
gives the generated songs their plain quarter-note pulse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .errors import CapacityExceeded, UnsupportedMeter
from .lyrics import STRESSED, PhraseList, WordEntry
from .theory import TimeSignature

if TYPE_CHECKING:
    from .planning import ScorePlan

STRONG = "strong"
WEAK = "weak"
OFF = "off"

# Longest singable values, in quarter notes: whole, dotted half, half,
# quarter, eighth. Durations are clipped to the largest fitting value.
DURATION_VOCAB = (Fraction(4), Fraction(3), Fraction(2), Fraction(1), Fraction(1, 2))

# A non-final syllable never sounds longer than a half note.
MAX_INNER_DURATION = Fraction(2)

_STRONG_BEATS = {4: (Fraction(0), Fraction(2)), 3: (Fraction(0),)}


def strong_beat_positions(ts: TimeSignature) -> tuple[Fraction, ...]:
    """Metrically accented onsets: beats 1 and 3 in 4/4, beat 1 in 3/4."""
    try:
        return _STRONG_BEATS[ts.beats_per_measure]
    except KeyError:
        raise UnsupportedMeter(f"no accent pattern for {ts}") from None


def measure_capacity(ts: TimeSignature) -> int:
    """Maximum syllables per measure (one per eighth-note slot)."""
    return 2 * ts.beats_per_measure


def beat_strength(ts: TimeSignature, onset: Fraction) -> str:
    """Classify an onset within a measure as strong, weak, or off the beat."""
    if onset in strong_beat_positions(ts):
        return STRONG
    if onset == int(onset):
        return WEAK
    return OFF


@dataclass(frozen=True)
class BeatGrid:
    """The full eighth-note slot grid of a meter, with beat strengths."""

    ts: TimeSignature
    slots: tuple[tuple[Fraction, str], ...]


def beat_grid(ts: TimeSignature) -> BeatGrid:
    slots = []
    for k in range(2 * ts.beats_per_measure):
        onset = Fraction(k, 2)
        slots.append((onset, beat_strength(ts, onset)))
    return BeatGrid(ts, tuple(slots))


@dataclass(frozen=True)
class LyricSyllable:
    """One syllable waiting to be placed, with its word-level flags."""

    syllable: str
    word: str
    stressed: bool
    is_keyword: bool
    phrase_index: int
    word_syllable_index: int = 0
    word_syllable_count: int = 1

    @property
    def is_keyword_stress(self) -> bool:
        return self.stressed and self.is_keyword


@dataclass(frozen=True)
class RhythmicEvent:
    """A timed syllable within one measure."""

    onset: Fraction
    duration: Fraction
    syllable: str
    word: str
    is_keyword_stress: bool
    phrase_index: int
    word_syllable_index: int = 0
    word_syllable_count: int = 1


@dataclass(frozen=True)
class RhythmicScore:
    measures: tuple[tuple[RhythmicEvent, ...], ...]
    plan: "ScorePlan"

    def events(self) -> list[RhythmicEvent]:
        return [event for measure in self.measures for event in measure]

    def syllables(self) -> list[str]:
        return [event.syllable for event in self.events()]


def phrase_syllables(
    phrase: list[str], dw: dict[str, WordEntry], phrase_index: int
) -> list[LyricSyllable]:
    """Expand a phrase's tokens into their ordered syllables."""
    out = []
    for token in phrase:
        entry = dw[token]
        count = len(entry.syllables)
        for i, (syllable, stress) in enumerate(zip(entry.syllables, entry.stress)):
            out.append(
                LyricSyllable(
                    syllable, token, stress == STRESSED, entry.is_keyword,
                    phrase_index, i, count,
                )
            )
    return out


def _keyword_chunks(events: list[LyricSyllable], span: int, accents: int) -> list[list[LyricSyllable]] | None:
    """Cut before every accents-th keyword-stressed syllable, so each measure
    receives its strong beats' worth of keywords. None when the phrase has
    too few keywords to define all span-1 boundaries."""
    kw_indices = [i for i, e in enumerate(events) if e.is_keyword_stress]
    if len(kw_indices) <= accents * (span - 1):
        return None
    bounds = [kw_indices[accents * j] for j in range(1, span)]
    chunks = []
    prev = 0
    for b in bounds:
        chunks.append(events[prev:b])
        prev = b
    chunks.append(events[prev:])
    return chunks


def _balanced_chunks(events: list[LyricSyllable], span: int) -> list[list[LyricSyllable]]:
    q, r = divmod(len(events), span)
    chunks = []
    start = 0
    for j in range(span):
        size = q + (1 if j < r else 0)
        chunks.append(events[start:start + size])
        start += size
    return chunks


def chunk_phrase(
    events: list[LyricSyllable], span: int, ts: TimeSignature
) -> list[list[LyricSyllable]]:
    """Split a phrase's syllables over its measures, keyword-aligned when
    possible and rebalanced to respect measure capacity."""
    if span == 1:
        return [list(events)]
    chunks = _keyword_chunks(events, span, ts.accents_per_measure)
    if chunks is None:
        chunks = _balanced_chunks(events, span)
    capacity = measure_capacity(ts)
    for j in range(len(chunks) - 1):
        while len(chunks[j]) > capacity:
            chunks[j + 1].insert(0, chunks[j].pop())
    for j in range(len(chunks) - 2, -1, -1):
        while len(chunks[j + 1]) > capacity and len(chunks[j]) < capacity:
            chunks[j].append(chunks[j + 1].pop(0))
    return chunks


def _anchor_slots(
    queue: list[LyricSyllable],
    positions: list[Fraction],
    strong: tuple[Fraction, ...],
) -> dict[int, int]:
    """Choose a slot for each keyword-stressed syllable: the next free strong
    beat that leaves room for the surrounding syllables, falling back to weak
    beats (never off-beats) when strong beats run out."""
    n, total = len(queue), len(positions)
    strong_slots = [i for i, p in enumerate(positions) if p in strong]
    weak_slots = [i for i, p in enumerate(positions) if p == int(p) and p not in strong]
    anchors: dict[int, int] = {}
    taken: set[int] = set()
    prev_slot, prev_index = -1, -1
    for i, event in enumerate(queue):
        if not event.is_keyword_stress:
            continue
        lo = max(i, prev_slot + (i - prev_index))
        hi = total - (n - i)
        slot = next((s for s in strong_slots if lo <= s <= hi and s not in taken), None)
        if slot is None:
            slot = next((s for s in weak_slots if lo <= s <= hi and s not in taken), None)
        if slot is None:
            continue
        anchors[i] = slot
        taken.add(slot)
        prev_slot, prev_index = slot, i
    return anchors


def build_measure_rhythm(
    queue: list[LyricSyllable],
    grid: BeatGrid,
    is_phrase_final_measure: bool,
) -> list[RhythmicEvent]:
    """Greedy placement of one measure's syllables, preserving lyric order.

    Keyword-stressed syllables anchor to strong beats; the rest fill the
    earlier free slots left to right. Each syllable rings until the next
    onset (clipped to the duration vocabulary, at most a half note), and the
    last syllable of a phrase rings to the end of its measure.
    """
    ts = grid.ts
    beats = ts.beats_per_measure
    n = len(queue)
    if n == 0:
        return []
    if n > measure_capacity(ts):
        raise CapacityExceeded(f"{n} syllables cannot fit a {ts} measure")
    if n <= beats:
        positions = [Fraction(k) for k in range(beats)]
    else:
        positions = [onset for onset, _ in grid.slots]
    anchors = _anchor_slots(queue, positions, strong_beat_positions(ts))
    anchored = set(anchors.values())

    slots: list[int] = []
    prev = -1
    for i in range(n):
        if i in anchors:
            slot = anchors[i]
        else:
            slot = next(s for s in range(prev + 1, len(positions)) if s not in anchored)
        slots.append(slot)
        prev = slot

    events = []
    for i, (event, slot) in enumerate(zip(queue, slots)):
        onset = positions[slot]
        if i + 1 < n:
            room = positions[slots[i + 1]] - onset
            limit = min(room, MAX_INNER_DURATION)
        else:
            room = Fraction(beats) - onset
            limit = room if is_phrase_final_measure else min(room, MAX_INNER_DURATION)
        duration = next(v for v in DURATION_VOCAB if v <= limit)
        events.append(
            RhythmicEvent(
                onset, duration, event.syllable, event.word,
                event.is_keyword_stress, event.phrase_index,
                event.word_syllable_index, event.word_syllable_count,
            )
        )
    return events


def construct_rhythmic_score(
    plan: "ScorePlan", lp: PhraseList, dw: dict[str, WordEntry]
) -> RhythmicScore:
    """Algorithm pass over every phrase and measure."""
    if len(plan.phrase_measure_spans) != len(lp):
        raise ValueError("plan spans do not match the phrase list")
    grid = beat_grid(plan.ts)
    measures: list[tuple[RhythmicEvent, ...]] = []
    for p, (phrase, span) in enumerate(zip(lp, plan.phrase_measure_spans)):
        events = phrase_syllables(phrase, dw, p)
        chunks = chunk_phrase(events, span, plan.ts)
        for j, chunk in enumerate(chunks):
            measures.append(tuple(build_measure_rhythm(chunk, grid, j == span - 1)))
    return RhythmicScore(tuple(measures), plan)
