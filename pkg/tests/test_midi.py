from fractions import Fraction

import pytest

from melodist.midi import (
    TICKS_PER_QUARTER,
    VELOCITY_STRONG,
    VELOCITY_WEAK,
    to_midi,
    total_ticks,
)
from melodist.pipeline import compose
from melodist.score import Note, Score
from melodist.theory import FOUR_FOUR, THREE_FOUR, parse_key_name


def _scan_events(data: bytes):
    """Independent minimal event walk used as the test-side oracle."""
    assert data[:4] == b"MThd"
    assert int.from_bytes(data[8:10], "big") == 0  # format 0
    assert int.from_bytes(data[12:14], "big") == TICKS_PER_QUARTER
    view = data[22:]
    i = 0
    events = []
    while i < len(view):
        delta = 0
        while True:
            byte = view[i]
            i += 1
            delta = (delta << 7) | (byte & 0x7F)
            if not byte & 0x80:
                break
        status = view[i]
        i += 1
        if status == 0xFF:
            kind = view[i]
            length = view[i + 1]
            i += 2 + length
            events.append((delta, "meta", kind, b""))
        elif status & 0xF0 == 0xC0:
            events.append((delta, "program", view[i], b""))
            i += 1
        else:
            events.append((delta, "note", status & 0xF0, view[i:i + 2]))
            i += 2
    return events


def _quarter_note_score():
    return Score(
        "Quarters", FOUR_FOUR, parse_key_name("C major"),
        ((Note(60, Fraction(1), "one"), Note(62, Fraction(1), "two"),
          Note(64, Fraction(1), "three"), Note(65, Fraction(1), "four")),),
    )


class TestToMidi:
    def test_quarter_note_is_480_ticks(self):
        events = _scan_events(to_midi(_quarter_note_score()))
        note_offs = [e for e in events if e[1] == "note" and e[2] == 0x80]
        assert all(delta == 480 for delta, *_ in note_offs)

    def test_strong_beats_accented(self):
        events = _scan_events(to_midi(_quarter_note_score()))
        note_ons = [e for e in events if e[1] == "note" and e[2] == 0x90]
        velocities = [e[3][1] for e in note_ons]
        # Beats 1 and 3 of 4/4 are strong.
        assert velocities == [VELOCITY_STRONG, VELOCITY_WEAK, VELOCITY_STRONG, VELOCITY_WEAK]

    def test_all_rest_score_has_no_note_events(self):
        score = Score("Rest", THREE_FOUR, parse_key_name("C major"),
                      ((Note(None, Fraction(3)),),))
        data = to_midi(score)
        events = _scan_events(data)
        assert not [e for e in events if e[1] == "note"]
        assert total_ticks(data) == 3 * TICKS_PER_QUARTER

    def test_program_change_matches_instrument(self):
        result = compose("Birds are flying in the sky.", key="C major", seed=1, instrument=24)
        events = _scan_events(result.midi)
        programs = [e[2] for e in events if e[1] == "program"]
        assert programs == [24]

    def test_total_ticks_equals_score_duration(self, birds_result):
        expected = birds_result.score.total_duration() * TICKS_PER_QUARTER
        assert total_ticks(birds_result.midi) == expected

    def test_rests_become_gaps(self):
        score = Score(
            "Gap", FOUR_FOUR, parse_key_name("C major"),
            ((Note(60, Fraction(1)), Note(None, Fraction(2)), Note(64, Fraction(1))),),
        )
        events = _scan_events(to_midi(score))
        note_events = [e for e in events if e[1] == "note"]
        # on(0) off(480) then the next on is delayed by the 2-quarter rest.
        assert note_events[2][0] == 2 * TICKS_PER_QUARTER

    def test_tied_notes_sound_once(self):
        score = Score(
            "Tied", FOUR_FOUR, parse_key_name("C major"),
            (
                (Note(None, Fraction(2)), Note(67, Fraction(2), tie="start")),
                (Note(67, Fraction(4), tie="stop"),),
            ),
        )
        events = _scan_events(to_midi(score))
        note_ons = [e for e in events if e[1] == "note" and e[2] == 0x90]
        note_offs = [e for e in events if e[1] == "note" and e[2] == 0x80]
        assert len(note_ons) == 1
        assert note_offs[0][0] == 6 * TICKS_PER_QUARTER

    def test_bad_tempo_rejected(self):
        with pytest.raises(ValueError):
            to_midi(_quarter_note_score(), tempo_bpm=0)
