"""Standard MIDI File output: format 0, 480 ticks per quarter note.

Strong-beat onsets play at velocity 96, everything else at 80; rests are
gaps between note-off and the next note-on. Ties (from parsed scores)
merge into a single sounding note. A small event scanner is included so
tests can verify total tick durations without a third-party reader.
"""

from __future__ import annotations

import struct
from fractions import Fraction

from .rhythm import STRONG, beat_strength
from .score import Score, TIE_STOP

TICKS_PER_QUARTER = 480
DEFAULT_TEMPO_BPM = 100
VELOCITY_STRONG = 96
VELOCITY_WEAK = 80
MIDI_MEDIA_TYPE = "audio/midi"


def _variable_length(value: int) -> bytes:
    """MIDI variable-length quantity encoding."""
    if value < 0:
        raise ValueError("delta time cannot be negative")
    chunks = [value & 0x7F]
    value >>= 7
    while value:
        chunks.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(chunks))


def _ticks(duration: Fraction) -> int:
    ticks = duration * TICKS_PER_QUARTER
    if ticks.denominator != 1:
        raise ValueError(f"duration {duration} does not quantize to 480 tpq")
    return ticks.numerator


def to_midi(score: Score, tempo_bpm: int = DEFAULT_TEMPO_BPM) -> bytes:
    """Serialize to a format-0 Standard MIDI File."""
    if tempo_bpm <= 0:
        raise ValueError("tempo must be positive")

    # Flatten to absolute tick positions, merging tie continuations into
    # their start note so each sung note is one note-on/note-off pair.
    items: list[list[int]] = []  # [start, pitch, duration, velocity]
    position_abs = 0
    for measure in score.measures:
        position = Fraction(0)
        for note in measure:
            ticks = _ticks(note.duration)
            if note.pitch is not None:
                last = items[-1] if items else None
                if (
                    note.tie == TIE_STOP
                    and last is not None
                    and last[1] == note.pitch
                    and last[0] + last[2] == position_abs
                ):
                    last[2] += ticks
                else:
                    velocity = (
                        VELOCITY_STRONG
                        if beat_strength(score.ts, position) == STRONG
                        else VELOCITY_WEAK
                    )
                    items.append([position_abs, note.pitch, ticks, velocity])
            position += note.duration
            position_abs += ticks

    events = bytearray()

    def emit(delta: int, message: bytes) -> None:
        events.extend(_variable_length(delta))
        events.extend(message)

    tempo = round(60_000_000 / tempo_bpm)
    emit(0, b"\xff\x51\x03" + tempo.to_bytes(3, "big"))
    beat_unit_power = score.ts.beat_unit.bit_length() - 1
    emit(0, bytes([0xFF, 0x58, 0x04, score.ts.beats_per_measure, beat_unit_power, 24, 8]))
    emit(0, bytes([0xC0, score.instrument]))
    cursor = 0
    for start, pitch, duration, velocity in items:
        emit(start - cursor, bytes([0x90, pitch, velocity]))
        emit(duration, bytes([0x80, pitch, 0]))
        cursor = start + duration
    emit(position_abs - cursor, b"\xff\x2f\x00")

    header = struct.pack(">4sIHHH", b"MThd", 6, 0, 1, TICKS_PER_QUARTER)
    track = struct.pack(">4sI", b"MTrk", len(events)) + bytes(events)
    return header + track


def total_ticks(data: bytes) -> int:
    """Sum of all delta times in a format-0 file (the song's tick length)."""
    if data[:4] != b"MThd":
        raise ValueError("not a MIDI file")
    track_start = 14
    if data[track_start:track_start + 4] != b"MTrk":
        raise ValueError("missing track chunk")
    length = int.from_bytes(data[track_start + 4:track_start + 8], "big")
    view = data[track_start + 8:track_start + 8 + length]
    i = 0
    total = 0
    running_status = 0
    while i < len(view):
        delta = 0
        while True:
            byte = view[i]
            i += 1
            delta = (delta << 7) | (byte & 0x7F)
            if not byte & 0x80:
                break
        total += delta
        status = view[i]
        if status & 0x80:
            i += 1
            running_status = status
        else:
            status = running_status
        if status == 0xFF:
            i += 1  # meta type
            meta_len = 0
            while True:
                byte = view[i]
                i += 1
                meta_len = (meta_len << 7) | (byte & 0x7F)
                if not byte & 0x80:
                    break
            i += meta_len
        elif status in (0xF0, 0xF7):
            sysex_len = view[i]
            i += 1 + sysex_len
        elif status & 0xF0 in (0xC0, 0xD0):
            i += 1
        else:
            i += 2
    return total
