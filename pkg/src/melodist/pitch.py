"""Pitch construction: seeded random melody generation adapted to the key,
with per-phrase smoothing and cadence resolution.

Generation and insertion run in lockstep over the rhythmic events; when a
phrase completes, its pitches are smoothed (leaps folded, leap runs
recovered, final note resolved). Given the same inputs and seed the result
is identical on every run and platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .config import DEFAULT_CONFIG, PitchConfig
from .metrics import profile_correlation
from .rhythm import RhythmicEvent, RhythmicScore
from .theory import KeySignature, scale_pitch_classes

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Scale:
    key: KeySignature
    pitch_classes: tuple[int, ...]

    @property
    def tonic_class(self) -> int:
        return self.pitch_classes[0]

    @property
    def mediant_class(self) -> int:
        return self.pitch_classes[2]

    @property
    def dominant_class(self) -> int:
        return self.pitch_classes[4]


@dataclass(frozen=True)
class PitchRange:
    low: int
    high: int

    def __post_init__(self) -> None:
        if not self.low < self.high:
            raise ValueError("pitch range low must be below high")

    def __contains__(self, midi_number: int) -> bool:
        return self.low <= midi_number <= self.high


@dataclass(frozen=True)
class MelodyLine:
    """Pitches paired one-to-one with the rhythmic events they carry."""

    pitches: tuple[int, ...]
    events: tuple[RhythmicEvent, ...]

    def __post_init__(self) -> None:
        if len(self.pitches) != len(self.events):
            raise ValueError("melody/event length mismatch")


def build_scale(ks: KeySignature) -> Scale:
    """Diatonic pitch classes of the key, tonic first."""
    return Scale(ks, scale_pitch_classes(ks))


def scale_tones(scale: Scale, pitch_range: PitchRange) -> tuple[int, ...]:
    """All in-range chromatic pitches belonging to the scale, ascending."""
    classes = set(scale.pitch_classes)
    return tuple(
        m for m in range(pitch_range.low, pitch_range.high + 1) if m % 12 in classes
    )


def interval_weight(delta: int, cfg: PitchConfig) -> float:
    d = abs(delta)
    if d == 0:
        return cfg.weight_unison
    if d <= 2:
        return cfg.weight_step
    if d <= 4:
        return cfg.weight_small_leap
    if d <= 7:
        return cfg.weight_fifth_leap
    if d <= 9:
        return cfg.weight_large_leap
    return 0.0


def _nearest(candidates: tuple[int, ...], target: int) -> int:
    """Closest candidate to target; ties resolve to the lower pitch."""
    return min(candidates, key=lambda m: (abs(m - target), m))


def generate_pitch(
    prev: int | None,
    scale: Scale,
    pitch_range: PitchRange,
    rng: random.Random,
    cfg: PitchConfig = DEFAULT_CONFIG,
) -> int:
    """One random scale tone: opening notes come from the tonic triad near
    the range center, later notes from an interval-weighted draw around the
    previous pitch (never wider than 9 semitones)."""
    tones = scale_tones(scale, pitch_range)
    if prev is None:
        center = (pitch_range.low + pitch_range.high) // 2
        openers = tuple(
            _nearest(tuple(t for t in tones if t % 12 == pc), center)
            for pc in (scale.tonic_class, scale.mediant_class, scale.dominant_class)
        )
        return rng.choice(openers)
    weights = [interval_weight(t - prev, cfg) for t in tones]
    return rng.choices(tones, weights=weights, k=1)[0]


def _fold_leap(note: int, ref: int, tones: tuple[int, ...], cfg: PitchConfig) -> int:
    """Bring a too-wide interval back inside the leap threshold, preferring
    an octave fold of the same pitch class."""
    same_class = tuple(
        t for t in tones if t % 12 == note % 12 and abs(t - ref) <= cfg.leap_threshold
    )
    if same_class:
        return _nearest(same_class, ref)
    near = tuple(t for t in tones if abs(t - ref) <= cfg.leap_threshold)
    return _nearest(near, note)


def _contrary_step(note: int, direction: int, tones: tuple[int, ...]) -> int | None:
    """Adjacent scale tone one step (1-2 semitones) against `direction`."""
    steps = tuple(t for t in tones if 1 <= (t - note) * -direction <= 2)
    if not steps:
        return None
    return _nearest(steps, note)


def adjust_phrase(
    segment: list[int],
    scale: Scale,
    phrase_pos: str,
    pitch_range: PitchRange | None = None,
    cfg: PitchConfig = DEFAULT_CONFIG,
    prev_context: int | None = None,
) -> list[int]:
    """Smooth one phrase: fold leaps beyond the threshold, recover after two
    same-direction leaps with a contrary step, and resolve the final note
    (tonic/mediant/dominant at phrase ends, tonic at the song end).

    phrase_pos is "internal" (no cadence), "final_phrase", or "final_song".
    prev_context, when given, is the note sounding just before the segment.
    """
    if not segment:
        return []
    if pitch_range is None:
        pitch_range = PitchRange(DEFAULT_CONFIG.range_low, DEFAULT_CONFIG.range_high)
    tones = scale_tones(scale, pitch_range)
    notes = list(segment)
    for i in range(len(notes)):
        if i >= 3:
            d1 = notes[i - 2] - notes[i - 3]
            d2 = notes[i - 1] - notes[i - 2]
            if abs(d1) >= 3 and abs(d2) >= 3 and d1 * d2 > 0:
                step = _contrary_step(notes[i - 1], 1 if d2 > 0 else -1, tones)
                if step is not None:
                    notes[i] = step
                    continue
        ref = prev_context if i == 0 else notes[i - 1]
        if ref is not None and abs(notes[i] - ref) > cfg.leap_threshold:
            notes[i] = _fold_leap(notes[i], ref, tones, cfg)
    if phrase_pos in ("final_phrase", "final_song"):
        tonic_reps = tuple(t for t in tones if t % 12 == scale.tonic_class)
        if phrase_pos == "final_song":
            candidates = tonic_reps
        else:
            # Cadence tones that leave the eventual tonic in reach, so the
            # song-final resolution never needs an oversized leap.
            classes = (scale.tonic_class, scale.dominant_class, scale.mediant_class)
            candidates = tuple(
                t for t in tones
                if t % 12 in classes
                and any(abs(t - r) <= cfg.leap_threshold for r in tonic_reps)
            )
        anchor = notes[-2] if len(notes) >= 2 else prev_context
        if anchor is None:
            notes[-1] = _nearest(candidates, notes[-1])
        else:
            reachable = tuple(
                t for t in candidates if abs(t - anchor) <= cfg.leap_threshold
            )
            if reachable:
                notes[-1] = _nearest(reachable, notes[-1])
            else:
                notes[-1] = _nearest(candidates, anchor)
                if len(notes) >= 2:
                    _smooth_backward(notes, tones, cfg, prev_context)
    return notes


def _smooth_backward(
    notes: list[int], tones: tuple[int, ...], cfg: PitchConfig, prev_context: int | None
) -> None:
    """Walk back from a pinned final note, moving each predecessor the
    minimum distance needed to respect the leap threshold. The displacement
    shrinks at every step, so the walk stops quickly."""
    for i in range(len(notes) - 2, -1, -1):
        if abs(notes[i] - notes[i + 1]) <= cfg.leap_threshold:
            break
        window = tuple(
            t for t in tones if abs(t - notes[i + 1]) <= cfg.leap_threshold
        )
        if i == 0 and prev_context is not None:
            both = tuple(
                t for t in window if abs(t - prev_context) <= cfg.leap_threshold
            )
            notes[0] = _nearest(both, notes[0]) if both else _nearest(window, prev_context)
        else:
            notes[i] = _nearest(window, notes[i])


def assign_pitches(
    rs: RhythmicScore,
    ks: KeySignature,
    seed: int,
    cfg: PitchConfig = DEFAULT_CONFIG,
) -> MelodyLine:
    """Generate-and-insert loop over all events, smoothing each phrase as it
    completes. Pure function of (rs, ks, seed, cfg)."""
    rng = random.Random(seed)
    scale = build_scale(ks)
    pitch_range = PitchRange(cfg.range_low, cfg.range_high)
    events = rs.events()
    if not events:
        return MelodyLine((), ())
    last_phrase = events[-1].phrase_index

    pitches: list[int] = []
    segment: list[int] = []
    prev: int | None = None
    boundary: int | None = None
    current = events[0].phrase_index

    def close_phrase(phrase_index: int) -> None:
        nonlocal prev, boundary, segment
        pos = "final_song" if phrase_index == last_phrase else "final_phrase"
        adjusted = adjust_phrase(segment, scale, pos, pitch_range, cfg, boundary)
        pitches.extend(adjusted)
        prev = boundary = adjusted[-1]
        segment = []

    for event in events:
        if event.phrase_index != current:
            close_phrase(current)
            current = event.phrase_index
        pitch = generate_pitch(prev, scale, pitch_range, rng, cfg)
        segment.append(pitch)
        prev = pitch
    close_phrase(current)
    return MelodyLine(tuple(pitches), tuple(events))


def _splitmix64(value: int) -> int:
    z = (value + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def candidate_seed(seed: int, index: int) -> int:
    """Decorrelated per-candidate stream seed."""
    return (seed ^ _splitmix64(index)) & _MASK64


def select_key(
    rs: RhythmicScore,
    candidates: list[KeySignature],
    seed: int,
    cfg: PitchConfig = DEFAULT_CONFIG,
) -> tuple[KeySignature, MelodyLine]:
    """Generate one melody per candidate key and keep the pair whose melody
    correlates best with its key's profile; ties keep the earlier candidate."""
    if not candidates:
        raise ValueError("select_key needs at least one candidate")
    best: tuple[float, int, KeySignature, MelodyLine] | None = None
    for i, key in enumerate(candidates):
        melody = assign_pitches(rs, key, candidate_seed(seed, i), cfg)
        weights = [0.0] * 12
        for pitch, event in zip(melody.pitches, melody.events):
            weights[pitch % 12] += float(event.duration)
        confidence = profile_correlation(weights, key)
        if best is None or confidence > best[0]:
            best = (confidence, i, key, melody)
    return best[2], best[3]
