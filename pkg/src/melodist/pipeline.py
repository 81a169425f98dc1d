"""End-to-end composition: lyrics in, score plus serialized artifacts out.

The "random" key option generates one candidate melody per sampled key and
keeps the best-correlated pair; a named key is honored as-is. Every path is
deterministic given (text, key, seed, config).
"""

from __future__ import annotations

import random
import re
import secrets
from dataclasses import dataclass, replace

from .config import DEFAULT_CONFIG, PitchConfig
from .errors import EmptyLyrics, NoPitches, TooShort, Undefined, ZeroVariance
from .lyrics import tokenize
from .metrics import EvaluationReport, evaluate_score
from .midi import DEFAULT_TEMPO_BPM, to_midi
from .musicxml import to_musicxml
from .pitch import assign_pitches, candidate_seed, select_key
from .planning import ScorePlan, setup_score
from .rhythm import construct_rhythmic_score
from .score import Score, finalize_score
from .theory import KEY_CATALOG, KeySignature, parse_key_name

RANDOM_KEY = "random"
DEFAULT_CANDIDATE_COUNT = 3


@dataclass(frozen=True)
class CompositionResult:
    score: Score
    plan: ScorePlan
    seed: int
    lyrics: str
    lyrical: bool
    musicxml: bytes
    midi: bytes
    report: EvaluationReport | None

    def report_dict(self) -> dict:
        return self.report.to_dict() if self.report is not None else {}


def make_seed() -> int:
    """Fresh unpredictable seed, echoed back for reproducibility."""
    return secrets.randbits(32)


def resolve_key(key: str | KeySignature | None) -> KeySignature | None:
    """None for the "random" option, otherwise a catalog key."""
    if key is None or (isinstance(key, str) and key.strip().lower() == RANDOM_KEY):
        return None
    if isinstance(key, KeySignature):
        return parse_key_name(key.name)  # catalog check
    return parse_key_name(key)


def default_title(text: str) -> str:
    words = tokenize(text)[:4]
    return " ".join(w.capitalize() for w in words) or "Untitled"


def slugify(text: str, limit: int = 3) -> str:
    words = tokenize(text)[:limit]
    slug = "-".join(re.sub(r"[^a-z0-9]+", "", w) for w in words)
    return slug or "untitled"


def key_slug(key: KeySignature) -> str:
    return (
        key.name.lower()
        .replace("#", "-sharp")
        .replace("b ", "-flat ")
        .replace(" ", "-")
    )


def artifact_basename(text: str, key: KeySignature, seed: int) -> str:
    return f"{slugify(text)}-{key_slug(key)}-{seed}"


def compose(
    text: str,
    key: str | KeySignature | None = RANDOM_KEY,
    seed: int | None = None,
    instrument: int = 0,
    title: str | None = None,
    lyrical: bool = True,
    cfg: PitchConfig = DEFAULT_CONFIG,
    tempo_bpm: int = DEFAULT_TEMPO_BPM,
    candidate_count: int = DEFAULT_CANDIDATE_COUNT,
) -> CompositionResult:
    """Compose a complete song (or non-lyrical melody) from lyrics."""
    if seed is None:
        seed = make_seed()
    user_key = resolve_key(key)
    plan, lp, dw = setup_score(text, user_key, seed)
    rs = construct_rhythmic_score(plan, lp, dw)
    if user_key is not None:
        melody = assign_pitches(rs, plan.ks, seed, cfg)
    else:
        candidates = _sample_candidates(plan, seed, candidate_count)
        chosen, melody = select_key(rs, candidates, seed, cfg)
        plan = replace(plan, ks=chosen)
        rs = replace(rs, plan=plan)
    score = finalize_score(rs, melody, title or default_title(text), instrument)
    try:
        report = evaluate_score(score)
    except (TooShort, Undefined, ZeroVariance, NoPitches):
        report = None  # degenerate one- or two-note songs have no metrics
    return CompositionResult(
        score=score,
        plan=plan,
        seed=seed,
        lyrics=text,
        lyrical=lyrical,
        musicxml=to_musicxml(score, include_lyrics=lyrical),
        midi=to_midi(score, tempo_bpm),
        report=report,
    )


def _sample_candidates(plan: ScorePlan, seed: int, count: int) -> list[KeySignature]:
    """Sample candidate keys in the sentiment-implied mode, so the
    negative-lyrics-minor rule survives the "random" option."""
    pool = [k for k in KEY_CATALOG if k.mode == plan.ks.mode]
    count = max(1, min(count, len(pool)))
    return random.Random(seed).sample(pool, count)


def extract_lyrics(score: Score) -> str:
    """Reconstruct lyric text from a score's syllables, keeping whatever
    punctuation the lyric elements carry (it marks phrase boundaries)."""
    words: list[str] = []
    pieces: list[str] = []
    for note in score.notes():
        if note.lyric is None or note.tie == "stop":
            continue
        pieces.append(note.lyric)
        if note.syllabic in (None, "single", "end"):
            words.append("".join(pieces))
            pieces = []
    if pieces:
        words.append("".join(pieces))
    text = " ".join(words)
    if not tokenize(text):
        raise EmptyLyrics("score carries no lyrics")
    return text


def nearest_catalog_key(key: KeySignature) -> KeySignature:
    """The catalog key of the same mode closest on the circle of fifths."""
    if key in KEY_CATALOG:
        return key
    pool = [k for k in KEY_CATALOG if k.mode == key.mode]
    return min(pool, key=lambda k: (abs(k.fifths - key.fifths), k.tonic))


def candidate_keys_for_compare(
    original_key: KeySignature, seed: int, original_index: int, count: int
) -> list[tuple[KeySignature, int]]:
    """Variant keys for the regeneration experiment: the first matches the
    original (mapped into the catalog when needed), the rest are sampled
    without replacement. Each variant carries its own derived seed."""
    anchor = nearest_catalog_key(original_key)
    pool = [k for k in KEY_CATALOG if k != anchor]
    rng = random.Random(candidate_seed(seed, original_index))
    extra = rng.sample(pool, max(0, min(count - 1, len(pool))))
    keys = [anchor, *extra]
    return [
        (key, candidate_seed(seed, (original_index << 16) + j))
        for j, key in enumerate(keys)
    ]
