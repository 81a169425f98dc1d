"""Deterministic lyric-to-melody composition with MusicXML/MIDI output
and music-theory evaluation metrics."""

__version__ = "0.1.0"

from .errors import MelodistError
from .theory import KEY_CATALOG, KeySignature, TimeSignature, parse_key_name

__all__ = [
    "KEY_CATALOG",
    "KeySignature",
    "MelodistError",
    "TimeSignature",
    "parse_key_name",
    "__version__",
]
