"""The finished score model: pitched, timed, lyric-aligned notes in measures.

A Score is what serializes to MusicXML and MIDI and what the evaluation
metrics consume. Durations are Fractions of a quarter note and every
measure's durations (notes plus rests) sum exactly to the meter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import AlignmentMismatch
from .pitch import MelodyLine
from .rhythm import DURATION_VOCAB, RhythmicScore
from .theory import KeySignature, TimeSignature

TIE_NONE = "none"
TIE_START = "start"
TIE_STOP = "stop"

SYLLABIC_SINGLE = "single"
SYLLABIC_BEGIN = "begin"
SYLLABIC_MIDDLE = "middle"
SYLLABIC_END = "end"


@dataclass(frozen=True)
class Note:
    """One note or rest. pitch is a MIDI number, or None for a rest."""

    pitch: int | None
    duration: Fraction
    lyric: str | None = None
    syllabic: str | None = None
    tie: str = TIE_NONE

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValueError("note duration must be positive")
        if self.pitch is not None and not 0 <= self.pitch <= 127:
            raise ValueError(f"pitch out of MIDI range: {self.pitch}")

    @property
    def is_rest(self) -> bool:
        return self.pitch is None


@dataclass(frozen=True)
class Score:
    title: str
    ts: TimeSignature
    ks: KeySignature
    measures: tuple[tuple[Note, ...], ...]
    instrument: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.instrument <= 127:
            raise ValueError(f"instrument out of program range: {self.instrument}")
        beats = Fraction(self.ts.beats_per_measure)
        for number, measure in enumerate(self.measures, 1):
            total = sum((n.duration for n in measure), Fraction(0))
            if total != beats:
                raise ValueError(
                    f"measure {number} sums to {total}, expected {beats}"
                )

    def notes(self) -> list[Note]:
        return [note for measure in self.measures for note in measure]

    def total_duration(self) -> Fraction:
        return sum((n.duration for n in self.notes()), Fraction(0))


def split_duration(gap: Fraction) -> list[Fraction]:
    """Split a time span into notatable values, longest first."""
    pieces = []
    remaining = gap
    while remaining > 0:
        value = next(v for v in DURATION_VOCAB if v <= remaining)
        pieces.append(value)
        remaining -= value
    return pieces


def _syllabic(index: int, count: int) -> str:
    if count == 1:
        return SYLLABIC_SINGLE
    if index == 0:
        return SYLLABIC_BEGIN
    if index == count - 1:
        return SYLLABIC_END
    return SYLLABIC_MIDDLE


def finalize_score(
    rs: RhythmicScore,
    ml: MelodyLine,
    title: str = "Untitled",
    instrument: int = 0,
) -> Score:
    """Merge rhythm, melody, and lyrics into a Score, padding gaps with rests."""
    events = rs.events()
    if len(ml.pitches) != len(events):
        raise AlignmentMismatch(
            f"{len(ml.pitches)} pitches for {len(events)} syllable events"
        )
    beats = Fraction(rs.plan.ts.beats_per_measure)
    measures: list[tuple[Note, ...]] = []
    cursor = 0
    for measure_events in rs.measures:
        notes: list[Note] = []
        position = Fraction(0)
        for event in measure_events:
            for rest in split_duration(event.onset - position):
                notes.append(Note(None, rest))
            notes.append(
                Note(
                    ml.pitches[cursor],
                    event.duration,
                    lyric=event.syllable,
                    syllabic=_syllabic(event.word_syllable_index, event.word_syllable_count),
                )
            )
            position = event.onset + event.duration
            cursor += 1
        for rest in split_duration(beats - position):
            notes.append(Note(None, rest))
        measures.append(tuple(notes))
    return Score(title, rs.plan.ts, rs.plan.ks, tuple(measures), instrument)
