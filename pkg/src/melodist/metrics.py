"""Music-theory evaluation: key confidence (Krumhansl-Schmuckler), melodic
smoothness (average interval, step ratio, direction change rate), rhythm
matching against a reference score, and corpus aggregation.
"""

from __future__ import annotations

import json
import math
import re
import statistics
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import LyricMismatch, NoPitches, TooShort, Undefined, ZeroVariance
from .lyrics import STRESSED, detect_keyword, syllabify
from .rhythm import beat_strength
from .theory import MAJOR, MINOR, KeySignature

if TYPE_CHECKING:
    from .score import Score

_NORM_RE = re.compile(r"[^a-z']+")


@lru_cache(maxsize=1)
def key_profiles() -> dict[str, tuple[float, ...]]:
    """Krumhansl-Kessler probe-tone profiles, loaded from the data file."""
    profiles = {}
    text = resources.files("melodist.data").joinpath("key_profiles.tsv").read_text("utf-8")
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        mode, *values = line.split("\t")
        profiles[mode] = tuple(float(v) for v in values)
    if set(profiles) != {MAJOR, MINOR} or any(len(p) != 12 for p in profiles.values()):
        raise ValueError("malformed key profile data")
    return profiles


def _pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    cov = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    var_x = sum((x - mean_x) ** 2 for x in xs)
    var_y = sum((y - mean_y) ** 2 for y in ys)
    if var_x == 0 or var_y == 0:
        raise ZeroVariance("pitch-class distribution is constant")
    return cov / math.sqrt(var_x * var_y)


def profile_correlation(weights: Sequence[float], key: KeySignature) -> float:
    """Correlation between a duration-weighted pitch-class vector and the
    key's profile rotated to its tonic."""
    profile = key_profiles()[key.mode]
    rotated = [profile[(pc - key.tonic) % 12] for pc in range(12)]
    return _pearson(weights, rotated)


def _candidate_keys() -> list[KeySignature]:
    # Tie-break order: lower tonic first, major before minor.
    return [KeySignature(t, m) for t in range(12) for m in (MAJOR, MINOR)]


def pitch_class_distribution(score: "Score") -> list[float]:
    """Total sounded duration per pitch class; rests are excluded."""
    weights = [0.0] * 12
    for note in score.notes():
        if note.pitch is not None:
            weights[note.pitch % 12] += float(note.duration)
    if not any(weights):
        raise NoPitches("score has no pitched notes")
    return weights


def key_confidence(
    score: "Score", key: KeySignature | None = None
) -> tuple[KeySignature, float]:
    """Krumhansl-Schmuckler key finding: correlate the score's pitch-class
    distribution against all 24 rotated profiles and keep the best, or
    report the correlation for one requested key."""
    weights = pitch_class_distribution(score)
    if key is not None:
        return key, profile_correlation(weights, key)
    best_key: KeySignature | None = None
    best_r = -2.0
    for candidate in _candidate_keys():
        r = profile_correlation(weights, candidate)
        # Correlations within 1e-12 count as tied, so the documented
        # tie-break (lower tonic, major first) is immune to float noise
        # from symmetric pitch-class distributions.
        if r > best_r + 1e-12:
            best_key, best_r = candidate, r
    assert best_key is not None
    return best_key, best_r


def melody_pitches(score: "Score") -> list[int]:
    """Ordered pitches of the monophonic line; tie continuations merge into
    their start note."""
    pitches = []
    for note in score.notes():
        if note.pitch is None or note.tie == "stop":
            continue
        pitches.append(note.pitch)
    return pitches


def melody_motion(score: "Score") -> list[tuple[int, int]]:
    """(note index, pitch) series for melody-motion plots and the UI."""
    return list(enumerate(melody_pitches(score)))


def average_interval(melody: Sequence[int]) -> float:
    """Mean absolute semitone distance between successive pitches."""
    if len(melody) < 2:
        raise TooShort("average interval needs at least two pitches")
    deltas = [abs(b - a) for a, b in zip(melody, melody[1:])]
    return sum(deltas) / len(deltas)


def step_ratio(melody: Sequence[int]) -> float:
    """steps / (steps + leaps); steps are 1-2 semitones, leaps 3 or more.
    Unisons belong to neither class and are excluded."""
    if len(melody) < 2:
        raise TooShort("step ratio needs at least two pitches")
    steps = leaps = 0
    for a, b in zip(melody, melody[1:]):
        d = abs(b - a)
        if 1 <= d <= 2:
            steps += 1
        elif d >= 3:
            leaps += 1
    if steps + leaps == 0:
        raise Undefined("all intervals are unisons")
    return steps / (steps + leaps)


def direction_change_rate(melody: Sequence[int]) -> float:
    """Fraction of consecutive moving intervals that flip direction."""
    if len(melody) < 3:
        raise TooShort("direction change rate needs at least three pitches")
    moves = [b - a for a, b in zip(melody, melody[1:]) if b != a]
    if len(moves) < 2:
        raise TooShort("direction change rate needs two non-unison intervals")
    flips = sum(1 for a, b in zip(moves, moves[1:]) if (a > 0) != (b > 0))
    return flips / (len(moves) - 1)


def _normalize_syllable(text: str) -> str:
    return _NORM_RE.sub("", text.lower())


@dataclass(frozen=True)
class _SyllableOnset:
    syllable: str
    strength: str
    word: str
    index_in_word: int


def _syllable_onsets(score: "Score") -> list[_SyllableOnset]:
    """Each sung syllable with its beat-strength class and position in its
    word (words reconstructed from the syllabic markers)."""
    out: list[tuple[str, str]] = []
    for measure in score.measures:
        position = Fraction(0)
        for note in measure:
            if note.lyric is not None and note.tie != "stop":
                out.append((_normalize_syllable(note.lyric), beat_strength(score.ts, position)))
            position += note.duration
    onsets: list[_SyllableOnset] = []
    buffer: list[tuple[str, str]] = []
    raw = [n for n in score.notes() if n.lyric is not None and n.tie != "stop"]
    for (syllable, strength), note in zip(out, raw):
        buffer.append((syllable, strength))
        if note.syllabic in (None, "single", "end"):
            word = "".join(s for s, _ in buffer)
            for i, (syl, stren) in enumerate(buffer):
                onsets.append(_SyllableOnset(syl, stren, word, i))
            buffer = []
    if buffer:
        word = "".join(s for s, _ in buffer)
        for i, (syl, stren) in enumerate(buffer):
            onsets.append(_SyllableOnset(syl, stren, word, i))
    return onsets


def _paired_onsets(
    generated: "Score", reference: "Score"
) -> list[tuple[_SyllableOnset, _SyllableOnset]]:
    gen = _syllable_onsets(generated)
    ref = _syllable_onsets(reference)
    if len(gen) != len(ref):
        raise LyricMismatch(
            f"syllable counts differ: {len(gen)} vs {len(ref)}"
        )
    if "".join(s.syllable for s in gen) != "".join(s.syllable for s in ref):
        raise LyricMismatch("lyric text differs between the scores")
    if not gen:
        raise LyricMismatch("scores carry no lyrics to compare")
    return list(zip(gen, ref))


def rhythm_match(generated: "Score", reference: "Score") -> float:
    """Fraction of syllable pairs whose onsets fall in the same
    beat-strength class (strong/weak/off) in their own meters."""
    pairs = _paired_onsets(generated, reference)
    hits = sum(1 for g, r in pairs if g.strength == r.strength)
    return hits / len(pairs)


def rhythm_match_keywords(generated: "Score", reference: "Score") -> float | None:
    """Same agreement restricted to keywords' stressed syllables; None when
    the lyrics contain none."""
    pairs = _paired_onsets(generated, reference)
    subset = []
    for g, r in pairs:
        if not detect_keyword(g.word):
            continue
        _, stress = syllabify(g.word)
        if g.index_in_word < len(stress) and stress[g.index_in_word] == STRESSED:
            subset.append((g, r))
    if not subset:
        return None
    return sum(1 for g, r in subset if g.strength == r.strength) / len(subset)


@dataclass(frozen=True)
class EvaluationReport:
    best_key: KeySignature
    key_confidence: float
    average_interval: float
    step_ratio: float
    direction_change_rate: float
    rhythm_match: float | None = None
    rhythm_match_keywords: float | None = None

    def to_dict(self) -> dict:
        data = {
            "best_key": self.best_key.name,
            "key_confidence": self.key_confidence,
            "average_interval": self.average_interval,
            "step_ratio": self.step_ratio,
            "direction_change_rate": self.direction_change_rate,
        }
        if self.rhythm_match is not None:
            data["rhythm_match"] = self.rhythm_match
        if self.rhythm_match_keywords is not None:
            data["rhythm_match_keywords"] = self.rhythm_match_keywords
        return data


def evaluate_score(score: "Score", reference: "Score | None" = None) -> EvaluationReport:
    """All metrics for one score; rhythm matching only with a reference."""
    best_key, confidence = key_confidence(score)
    melody = melody_pitches(score)
    report = EvaluationReport(
        best_key=best_key,
        key_confidence=confidence,
        average_interval=average_interval(melody),
        step_ratio=step_ratio(melody),
        direction_change_rate=direction_change_rate(melody),
    )
    if reference is not None:
        report = replace(
            report,
            rhythm_match=rhythm_match(score, reference),
            rhythm_match_keywords=rhythm_match_keywords(score, reference),
        )
    return report


@dataclass(frozen=True)
class MetricSummary:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    mean: float
    count: int

    def to_dict(self) -> dict:
        return {
            "min": self.minimum, "q1": self.q1, "median": self.median,
            "q3": self.q3, "max": self.maximum, "mean": self.mean,
            "count": self.count,
        }


@dataclass(frozen=True)
class CorpusStats:
    """Metric summaries grouped by time signature plus an "all" group."""

    groups: dict[str, dict[str, MetricSummary]]

    def to_dict(self) -> dict:
        return {
            group: {metric: summary.to_dict() for metric, summary in metrics.items()}
            for group, metrics in self.groups.items()
        }


def summarize(values: Iterable[float]) -> MetricSummary:
    data = sorted(values)
    if not data:
        raise ValueError("cannot summarize an empty series")
    if len(data) == 1:
        q1 = q3 = data[0]
    else:
        quartiles = statistics.quantiles(data, n=4, method="inclusive")
        q1, q3 = quartiles[0], quartiles[2]
    return MetricSummary(
        minimum=data[0], q1=q1, median=statistics.median(data), q3=q3,
        maximum=data[-1], mean=statistics.fmean(data), count=len(data),
    )


_GROUPS = ("all", "4/4", "3/4")


def evaluate_corpus(
    items: Sequence[tuple["Score", "Score | None"]],
) -> tuple[CorpusStats, list[EvaluationReport]]:
    """Per-score reports plus min/quartile/max/mean summaries per metric,
    grouped by time signature. Empty groups stay present (and empty) so a
    corpus without 3/4 songs is visible rather than an error."""
    if not items:
        raise ValueError("corpus must contain at least one score")
    reports = [evaluate_score(score, reference) for score, reference in items]
    series: dict[str, dict[str, list[float]]] = {g: {} for g in _GROUPS}
    for (score, _), report in zip(items, reports):
        for group in ("all", score.ts.name):
            for metric, value in report.to_dict().items():
                if isinstance(value, float):
                    series[group].setdefault(metric, []).append(value)
    stats = CorpusStats({
        group: {metric: summarize(values) for metric, values in metrics.items()}
        for group, metrics in series.items()
    })
    return stats, reports


def write_report(path, scores: Sequence["Score"], reports: Sequence[EvaluationReport], stats: CorpusStats) -> None:
    """Machine-readable corpus report (JSON; schema documented in README)."""
    payload = {
        "scores": [
            {
                "title": score.title,
                "time_signature": score.ts.name,
                "key": score.ks.name,
                **report.to_dict(),
            }
            for score, report in zip(scores, reports)
        ],
        "groups": stats.to_dict(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def plot_table(stats: CorpusStats) -> str:
    """Quantile table for violin-style plots: metric, group, quantile, value."""
    lines = ["metric\tgroup\tquantile\tvalue"]
    for group, metrics in stats.groups.items():
        for metric, summary in metrics.items():
            for quantile, value in (
                ("min", summary.minimum), ("q1", summary.q1),
                ("median", summary.median), ("q3", summary.q3),
                ("max", summary.maximum), ("mean", summary.mean),
            ):
                lines.append(f"{metric}\t{group}\t{quantile}\t{value:.6f}")
    return "\n".join(lines) + "\n"
