"""Shared musical vocabulary: keys, meters, scales, and note spelling.

Pitch classes are integers 0-11 with 0 = C; MIDI note 60 is middle C.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownKey, UnsupportedMeter

MAJOR = "major"
MINOR = "minor"

MAJOR_STEPS = (0, 2, 4, 5, 7, 9, 11)
NATURAL_MINOR_STEPS = (0, 2, 3, 5, 7, 8, 10)

_SHARP_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")
_FLAT_NAMES = ("C", "Db", "D", "Eb", "E", "F", "Gb", "G", "Ab", "A", "Bb", "B")

_NAME_TO_PC = {
    "C": 0, "B#": 0, "C#": 1, "DB": 1, "D": 2, "D#": 3, "EB": 3, "E": 4,
    "FB": 4, "E#": 5, "F": 5, "F#": 6, "GB": 6, "G": 7, "G#": 8, "AB": 8,
    "A": 9, "A#": 10, "BB": 10, "B": 11, "CB": 11,
}

# Position on the circle of fifths (MusicXML <fifths>), per mode.
_MAJOR_FIFTHS = {0: 0, 7: 1, 2: 2, 9: 3, 4: 4, 11: 5, 6: 6, 5: -1, 10: -2, 3: -3, 8: -4, 1: -5}
_MINOR_FIFTHS = {9: 0, 4: 1, 11: 2, 6: 3, 1: 4, 8: 5, 3: 6, 2: -1, 7: -2, 0: -3, 5: -4, 10: -5}


@dataclass(frozen=True)
class KeySignature:
    """A tonic pitch class plus major/minor mode."""

    tonic: int
    mode: str

    def __post_init__(self) -> None:
        if not 0 <= self.tonic <= 11:
            raise UnknownKey(f"tonic pitch class out of range: {self.tonic}")
        if self.mode not in (MAJOR, MINOR):
            raise UnknownKey(f"unsupported mode: {self.mode}")

    @property
    def fifths(self) -> int:
        table = _MAJOR_FIFTHS if self.mode == MAJOR else _MINOR_FIFTHS
        return table[self.tonic]

    @property
    def name(self) -> str:
        names = _SHARP_NAMES if self.fifths >= 0 else _FLAT_NAMES
        return f"{names[self.tonic]} {self.mode}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TimeSignature:
    """Meter; only 4/4 and 3/4 are generated."""

    beats_per_measure: int
    beat_unit: int

    def __post_init__(self) -> None:
        if (self.beats_per_measure, self.beat_unit) not in ((4, 4), (3, 4)):
            raise UnsupportedMeter(
                f"unsupported meter {self.beats_per_measure}/{self.beat_unit}"
            )

    @property
    def accents_per_measure(self) -> int:
        return 2 if self.beats_per_measure == 4 else 1

    @property
    def name(self) -> str:
        return f"{self.beats_per_measure}/{self.beat_unit}"

    def __str__(self) -> str:
        return self.name


FOUR_FOUR = TimeSignature(4, 4)
THREE_FOUR = TimeSignature(3, 4)

# The 17 supported keys: every major key up to four accidentals plus
# minor keys up to four accidentals and F# minor. One assumption, one constant.
KEY_CATALOG: tuple[KeySignature, ...] = (
    KeySignature(0, MAJOR),   # C major
    KeySignature(7, MAJOR),   # G major
    KeySignature(2, MAJOR),   # D major
    KeySignature(9, MAJOR),   # A major
    KeySignature(4, MAJOR),   # E major
    KeySignature(5, MAJOR),   # F major
    KeySignature(10, MAJOR),  # Bb major
    KeySignature(3, MAJOR),   # Eb major
    KeySignature(8, MAJOR),   # Ab major
    KeySignature(9, MINOR),   # A minor
    KeySignature(4, MINOR),   # E minor
    KeySignature(11, MINOR),  # B minor
    KeySignature(2, MINOR),   # D minor
    KeySignature(7, MINOR),   # G minor
    KeySignature(0, MINOR),   # C minor
    KeySignature(5, MINOR),   # F minor
    KeySignature(6, MINOR),   # F# minor
)


def parse_key_name(text: str) -> KeySignature:
    """Parse names like "D major", "F# minor", "bb major" (case-insensitive)."""
    parts = text.strip().split()
    if len(parts) != 2:
        raise UnknownKey(f"cannot parse key name: {text!r}")
    tonic_name, mode = parts[0].upper(), parts[1].lower()
    if tonic_name not in _NAME_TO_PC or mode not in (MAJOR, MINOR):
        raise UnknownKey(f"cannot parse key name: {text!r}")
    key = KeySignature(_NAME_TO_PC[tonic_name], mode)
    if key not in KEY_CATALOG:
        raise UnknownKey(f"key outside the supported catalog: {key.name}")
    return key


def key_from_fifths(fifths: int, mode: str) -> KeySignature:
    """Invert the circle-of-fifths mapping used by MusicXML key elements."""
    table = _MAJOR_FIFTHS if mode == MAJOR else _MINOR_FIFTHS
    for tonic, value in table.items():
        if value == fifths:
            return KeySignature(tonic, mode)
    raise UnknownKey(f"no {mode} key with {fifths} fifths")


def scale_pitch_classes(key: KeySignature) -> tuple[int, ...]:
    """The seven diatonic pitch classes of the key, tonic first."""
    steps = MAJOR_STEPS if key.mode == MAJOR else NATURAL_MINOR_STEPS
    return tuple((key.tonic + s) % 12 for s in steps)


def spell_pitch(midi_number: int, fifths: int) -> tuple[str, int, int]:
    """Return (step, alter, octave), using sharps on the sharp side of the
    circle of fifths and flats on the flat side."""
    pc = midi_number % 12
    octave = midi_number // 12 - 1
    names = _SHARP_NAMES if fifths >= 0 else _FLAT_NAMES
    name = names[pc]
    if len(name) == 1:
        return name, 0, octave
    if name.endswith("#"):
        return name[0], 1, octave
    return name[0], -1, octave


def midi_from_spelling(step: str, alter: int, octave: int) -> int:
    return (octave + 1) * 12 + _NAME_TO_PC[step.upper()] + alter
