"""Tunable pitch-sampler settings, loadable from a key=value text file.

File format: one `name = value` per line, `#` comments, blank lines ignored.
Unknown names are rejected so typos surface immediately. The bundled
data/pitch.conf documents every name with its default.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class PitchConfig:
    range_low: int = 60           # C4
    range_high: int = 76          # E5
    leap_threshold: int = 7       # perfect fifth; folded above this
    weight_unison: float = 1.0    # |interval| == 0
    weight_step: float = 7.0      # 1-2 semitones
    weight_small_leap: float = 3.0   # 3-4
    weight_fifth_leap: float = 1.5   # 5-7
    weight_large_leap: float = 0.5   # 8-9; wider is never sampled

    def __post_init__(self) -> None:
        if self.range_high - self.range_low < 12:
            raise ConfigError("pitch range must span at least an octave")
        if not 0 <= self.range_low and self.range_high <= 127:
            raise ConfigError("pitch range must stay within MIDI 0-127")
        if self.leap_threshold < 2:
            raise ConfigError("leap threshold must be at least 2 semitones")
        for f in fields(self):
            if f.name.startswith("weight_") and getattr(self, f.name) < 0:
                raise ConfigError(f"{f.name} must be non-negative")


DEFAULT_CONFIG = PitchConfig()

_NAMES = {
    "range.low": ("range_low", int),
    "range.high": ("range_high", int),
    "leap.threshold": ("leap_threshold", int),
    "weight.unison": ("weight_unison", float),
    "weight.step": ("weight_step", float),
    "weight.small_leap": ("weight_small_leap", float),
    "weight.fifth_leap": ("weight_fifth_leap", float),
    "weight.large_leap": ("weight_large_leap", float),
}


def load_config(path: str | Path) -> PitchConfig:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = (part.strip() for part in line.partition("="))
        if not sep or name not in _NAMES:
            raise ConfigError(f"{path}:{lineno}: unknown or malformed setting {name!r}")
        field, cast = _NAMES[name]
        try:
            values[field] = cast(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {name}: {value!r}") from exc
    return replace(DEFAULT_CONFIG, **values)
