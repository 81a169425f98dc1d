"""MusicXML 3.1 serialization: a canonical (byte-stable) emitter, a parser
for monophonic single-part scores, and a structural validator.

The emitter writes score-partwise documents by hand so that identical scores
produce identical bytes on every platform: fixed element order, fixed
two-space indentation, no timestamps.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import lcm
from xml.etree import ElementTree
from xml.sax.saxutils import escape

from .errors import MalformedScore
from .instruments import instrument_name
from .score import Note, Score, TIE_NONE, TIE_START, TIE_STOP
from .theory import (
    MAJOR,
    MINOR,
    KeySignature,
    TimeSignature,
    key_from_fifths,
    midi_from_spelling,
    spell_pitch,
)

logger = logging.getLogger(__name__)

MUSICXML_MEDIA_TYPE = "application/vnd.recordare.musicxml+xml"

_DOCTYPE = (
    '<!DOCTYPE score-partwise PUBLIC "-//Recordare//DTD MusicXML 3.1 '
    'Partwise//EN" "http://www.musicxml.org/dtds/partwise.dtd">'
)

# (quarter-note length, MusicXML type name); dotted values add one dot.
_TYPE_TABLE = (
    (Fraction(4), "whole"),
    (Fraction(2), "half"),
    (Fraction(1), "quarter"),
    (Fraction(1, 2), "eighth"),
    (Fraction(1, 4), "16th"),
)

_VALID_TYPES = frozenset(name for _, name in _TYPE_TABLE) | {
    "breve", "32nd", "64th", "128th",
}
_VALID_SYLLABIC = frozenset({"single", "begin", "middle", "end"})


def _duration_type(duration: Fraction) -> tuple[str, int] | None:
    """MusicXML type name and dot count, or None for irregular values."""
    for base, name in _TYPE_TABLE:
        if duration == base:
            return name, 0
        if duration == base * Fraction(3, 2):
            return name, 1
    return None


def _divisions(score: Score) -> int:
    value = 1
    for note in score.notes():
        value = lcm(value, note.duration.denominator)
    return value


def to_musicxml(score: Score, include_lyrics: bool = True) -> bytes:
    """Serialize to score-partwise MusicXML 3.1 with stable bytes."""
    divisions = _divisions(score)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        _DOCTYPE,
        '<score-partwise version="3.1">',
        f"  <movement-title>{escape(score.title)}</movement-title>",
        "  <identification>",
        "    <encoding>",
        "      <software>melodist</software>",
        "    </encoding>",
        "  </identification>",
        "  <part-list>",
        '    <score-part id="P1">',
        "      <part-name>Voice</part-name>",
        '      <score-instrument id="P1-I1">',
        f"        <instrument-name>{escape(instrument_name(score.instrument))}</instrument-name>",
        "      </score-instrument>",
        '      <midi-instrument id="P1-I1">',
        "        <midi-channel>1</midi-channel>",
        f"        <midi-program>{score.instrument + 1}</midi-program>",
        "      </midi-instrument>",
        "    </score-part>",
        "  </part-list>",
        '  <part id="P1">',
    ]
    for number, measure in enumerate(score.measures, 1):
        out.append(f'    <measure number="{number}">')
        if number == 1:
            out.extend([
                "      <attributes>",
                f"        <divisions>{divisions}</divisions>",
                "        <key>",
                f"          <fifths>{score.ks.fifths}</fifths>",
                f"          <mode>{score.ks.mode}</mode>",
                "        </key>",
                "        <time>",
                f"          <beats>{score.ts.beats_per_measure}</beats>",
                f"          <beat-type>{score.ts.beat_unit}</beat-type>",
                "        </time>",
                "        <clef>",
                "          <sign>G</sign>",
                "          <line>2</line>",
                "        </clef>",
                "      </attributes>",
            ])
        for note in measure:
            out.extend(_note_lines(note, divisions, score.ks.fifths, include_lyrics))
        out.append("    </measure>")
    out.extend(["  </part>", "</score-partwise>", ""])
    return "\n".join(out).encode("utf-8")


def _note_lines(note: Note, divisions: int, fifths: int, include_lyrics: bool) -> list[str]:
    lines = ["      <note>"]
    if note.is_rest:
        lines.append("        <rest/>")
    else:
        step, alter, octave = spell_pitch(note.pitch, fifths)
        lines.append("        <pitch>")
        lines.append(f"          <step>{step}</step>")
        if alter:
            lines.append(f"          <alter>{alter}</alter>")
        lines.append(f"          <octave>{octave}</octave>")
        lines.append("        </pitch>")
    ticks = note.duration * divisions
    lines.append(f"        <duration>{ticks.numerator}</duration>")
    if note.tie != TIE_NONE:
        lines.append(f'        <tie type="{note.tie}"/>')
    lines.append("        <voice>1</voice>")
    named = _duration_type(note.duration)
    if named is not None:
        type_name, dots = named
        lines.append(f"        <type>{type_name}</type>")
        lines.extend("        <dot/>" for _ in range(dots))
    if note.tie != TIE_NONE:
        lines.extend([
            "        <notations>",
            f'          <tied type="{note.tie}"/>',
            "        </notations>",
        ])
    if include_lyrics and note.lyric is not None:
        lines.extend([
            '        <lyric number="1">',
            f"          <syllabic>{note.syllabic or 'single'}</syllabic>",
            f"          <text>{escape(note.lyric)}</text>",
            "        </lyric>",
        ])
    lines.append("      </note>")
    return lines


def _parse_xml(data: bytes) -> ElementTree.Element:
    try:
        return ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise MalformedScore(f"not well-formed XML: {exc}") from exc


def _int_text(element: ElementTree.Element | None, what: str) -> int:
    if element is None or element.text is None:
        raise MalformedScore(f"missing {what}")
    try:
        return int(element.text.strip())
    except ValueError as exc:
        raise MalformedScore(f"bad {what}: {element.text!r}") from exc


def parse_musicxml(data: bytes) -> Score:
    """Read the first part's monophonic line back into a Score.

    Chords collapse to their top note, grace notes are dropped, extra parts
    are ignored with a warning, and underfull measures are padded with
    trailing rests (also with a warning).
    """
    root = _parse_xml(data)
    if root.tag != "score-partwise":
        raise MalformedScore(f"unsupported root element: {root.tag}")
    parts = root.findall("part")
    if not parts:
        raise MalformedScore("document has no part")
    if len(parts) > 1:
        logger.warning("multiple parts found; using the first of %d", len(parts))
    title_el = root.find("movement-title")
    title = title_el.text.strip() if title_el is not None and title_el.text else "Untitled"
    instrument = 0
    program_el = root.find("part-list/score-part/midi-instrument/midi-program")
    if program_el is not None:
        instrument = max(0, min(127, _int_text(program_el, "midi-program") - 1))

    divisions: int | None = None
    ts: TimeSignature | None = None
    ks = KeySignature(0, MAJOR)
    measures: list[tuple[Note, ...]] = []
    voice: str | None = None
    for measure_el in parts[0].findall("measure"):
        attributes = measure_el.find("attributes")
        if attributes is not None:
            div_el = attributes.find("divisions")
            if div_el is not None:
                divisions = _int_text(div_el, "divisions")
                if divisions <= 0:
                    raise MalformedScore("divisions must be positive")
            key_el = attributes.find("key")
            if key_el is not None:
                fifths = _int_text(key_el.find("fifths"), "key fifths")
                mode_el = key_el.find("mode")
                mode = mode_el.text.strip() if mode_el is not None and mode_el.text else MAJOR
                if mode not in (MAJOR, MINOR):
                    mode = MAJOR
                try:
                    ks = key_from_fifths(fifths, mode)
                except Exception as exc:
                    raise MalformedScore(f"unsupported key signature: {exc}") from exc
            time_el = attributes.find("time")
            if time_el is not None:
                beats = _int_text(time_el.find("beats"), "time beats")
                beat_type = _int_text(time_el.find("beat-type"), "time beat-type")
                try:
                    ts = TimeSignature(beats, beat_type)
                except Exception as exc:
                    raise MalformedScore(str(exc)) from exc
        if ts is None:
            raise MalformedScore("no time signature before the first measure")
        if divisions is None:
            logger.warning("no divisions declared; assuming 1")
            divisions = 1
        notes, voice = _parse_measure(measure_el, divisions, voice)
        measures.append(tuple(notes))
    if not measures:
        raise MalformedScore("part has no measures")
    measures = _pad_measures(measures, ts)
    try:
        return Score(title, ts, ks, tuple(measures), instrument)
    except ValueError as exc:
        raise MalformedScore(str(exc)) from exc


def _parse_measure(
    measure_el: ElementTree.Element, divisions: int, voice: str | None
) -> tuple[list[Note], str | None]:
    notes: list[Note] = []
    for note_el in measure_el.findall("note"):
        if note_el.find("grace") is not None:
            continue
        note_voice_el = note_el.find("voice")
        note_voice = note_voice_el.text.strip() if note_voice_el is not None and note_voice_el.text else None
        if note_voice is not None:
            if voice is None:
                voice = note_voice
            elif note_voice != voice:
                continue
        duration = Fraction(_int_text(note_el.find("duration"), "note duration"), divisions)
        pitch_el = note_el.find("pitch")
        in_chord = note_el.find("chord") is not None
        if pitch_el is not None:
            step = pitch_el.find("step")
            if step is None or step.text is None:
                raise MalformedScore("pitch without step")
            alter_el = pitch_el.find("alter")
            alter = _int_text(alter_el, "alter") if alter_el is not None else 0
            octave = _int_text(pitch_el.find("octave"), "octave")
            midi = midi_from_spelling(step.text.strip(), alter, octave)
            pitch: int | None = midi
        elif note_el.find("rest") is not None:
            pitch = None
        else:
            raise MalformedScore("note with neither pitch nor rest")
        tie = TIE_NONE
        tie_types = {t.get("type") for t in note_el.findall("tie")}
        if "stop" in tie_types:
            tie = TIE_STOP
        elif "start" in tie_types:
            tie = TIE_START
        lyric = None
        syllabic = None
        lyric_el = note_el.find("lyric")
        if lyric_el is not None:
            text_el = lyric_el.find("text")
            if text_el is not None and text_el.text:
                lyric = text_el.text
                syllabic_el = lyric_el.find("syllabic")
                syllabic = (
                    syllabic_el.text.strip()
                    if syllabic_el is not None and syllabic_el.text
                    else "single"
                )
        if in_chord and notes and pitch is not None:
            previous = notes[-1]
            if previous.pitch is not None and pitch > previous.pitch:
                notes[-1] = Note(pitch, previous.duration, previous.lyric, previous.syllabic, previous.tie)
            continue
        notes.append(Note(pitch, duration, lyric, syllabic, tie))
    return notes, voice


def _pad_measures(
    measures: list[tuple[Note, ...]], ts: TimeSignature
) -> list[tuple[Note, ...]]:
    from .score import split_duration

    beats = Fraction(ts.beats_per_measure)
    padded = []
    for number, measure in enumerate(measures, 1):
        total = sum((n.duration for n in measure), Fraction(0))
        if total > beats:
            raise MalformedScore(f"measure {number} overfull: {total} quarters")
        if total < beats:
            logger.warning("measure %d underfull; padding with rests", number)
            measure = measure + tuple(Note(None, d) for d in split_duration(beats - total))
        padded.append(measure)
    return padded


# Element order inside <note>, per the MusicXML 3.1 content model (subset we
# emit plus a few common optional elements).
_NOTE_ORDER = (
    "grace", "chord", "pitch", "rest", "unpitched", "duration", "tie",
    "instrument", "voice", "type", "dot", "accidental", "time-modification",
    "stem", "notehead", "staff", "beam", "notations", "lyric",
)
_ATTRIBUTES_ORDER = (
    "footnote", "level", "divisions", "key", "time", "staves", "part-symbol",
    "instruments", "clef", "staff-details", "transpose", "directive",
    "measure-style",
)
_PITCH_ORDER = ("step", "alter", "octave")


def _check_order(element: ElementTree.Element, order: tuple[str, ...], where: str, issues: list[str]) -> None:
    ranks = []
    for child in element:
        if child.tag in order:
            ranks.append(order.index(child.tag))
        else:
            issues.append(f"{where}: unexpected element <{child.tag}>")
    if ranks != sorted(ranks):
        issues.append(f"{where}: children out of schema order")


def validate_musicxml(data: bytes) -> list[str]:
    """Structural validation against the MusicXML 3.1 content model for the
    subset this package emits. Returns a list of issues; empty means valid.

    This stands in for XSD validation when the published schema is not
    available locally; tests also run a real XSD validator when one is
    importable and MUSICXML_XSD_PATH is set.
    """
    issues: list[str] = []
    try:
        root = _parse_xml(data)
    except MalformedScore as exc:
        return [str(exc)]
    if root.tag != "score-partwise":
        return [f"root element must be score-partwise, got {root.tag}"]
    if root.get("version") not in ("3.0", "3.1", "4.0"):
        issues.append("missing or unsupported version attribute")
    part_ids = [sp.get("id") for sp in root.findall("part-list/score-part")]
    if not part_ids:
        issues.append("part-list has no score-part")
    for part in root.findall("part"):
        if part.get("id") not in part_ids:
            issues.append(f"part {part.get('id')!r} not declared in part-list")
        previous_number = 0
        for measure in part.findall("measure"):
            number = measure.get("number")
            if number is None or not number.lstrip("-").isdigit():
                issues.append("measure without numeric number attribute")
            else:
                if int(number) != previous_number + 1:
                    issues.append(f"measure numbers not consecutive at {number}")
                previous_number = int(number)
            for attributes in measure.findall("attributes"):
                _check_order(attributes, _ATTRIBUTES_ORDER, "attributes", issues)
                div = attributes.find("divisions")
                if div is not None and (not div.text or int(div.text) <= 0):
                    issues.append("divisions must be a positive integer")
                fifths = attributes.find("key/fifths")
                if fifths is not None and not -7 <= int(fifths.text) <= 7:
                    issues.append("key fifths out of range")
            for note in measure.findall("note"):
                _validate_note(note, issues)
    return issues


def _validate_note(note: ElementTree.Element, issues: list[str]) -> None:
    _check_order(note, _NOTE_ORDER, "note", issues)
    has_pitch = note.find("pitch") is not None
    has_rest = note.find("rest") is not None
    if has_pitch == has_rest:
        issues.append("note must have exactly one of pitch or rest")
    if has_pitch:
        pitch = note.find("pitch")
        _check_order(pitch, _PITCH_ORDER, "pitch", issues)
        step = pitch.find("step")
        if step is None or step.text not in tuple("ABCDEFG"):
            issues.append("pitch step must be A-G")
        octave = pitch.find("octave")
        if octave is None or not -1 <= int(octave.text) <= 9:
            issues.append("pitch octave out of range")
    if note.find("grace") is None:
        duration = note.find("duration")
        if duration is None or not duration.text or int(duration.text) <= 0:
            issues.append("note duration must be a positive integer")
    type_el = note.find("type")
    if type_el is not None and type_el.text not in _VALID_TYPES:
        issues.append(f"unknown note type {type_el.text!r}")
    for tie in note.findall("tie"):
        if tie.get("type") not in ("start", "stop"):
            issues.append("tie type must be start or stop")
    for lyric in note.findall("lyric"):
        syllabic = lyric.find("syllabic")
        if syllabic is not None and syllabic.text not in _VALID_SYLLABIC:
            issues.append(f"invalid syllabic value {syllabic.text!r}")
        if lyric.find("text") is None:
            issues.append("lyric without text")
