"""Exception hierarchy shared by all modules."""


class MelodistError(Exception):
    """Base class for all errors raised by this package."""


class EmptyLyrics(MelodistError):
    """Input text contains no word tokens."""


class UnknownKey(MelodistError):
    """Key name is not in the supported key catalog."""


class UnsupportedMeter(MelodistError):
    """Time signature outside the supported 4/4 and 3/4 pair."""


class CapacityExceeded(MelodistError):
    """More syllables assigned to a measure than it has slots."""


class AlignmentMismatch(MelodistError):
    """Melody length does not match the rhythmic event count."""


class MalformedScore(MelodistError):
    """MusicXML input is not well-formed or structurally usable."""


class UnsupportedFeature(MelodistError):
    """Parsed score uses a feature outside the supported subset."""


class NoPitches(MelodistError):
    """Score contains no pitched notes."""


class ZeroVariance(MelodistError):
    """Pitch-class distribution is constant; correlation undefined."""


class TooShort(MelodistError):
    """Melody has too few notes for the requested metric."""


class Undefined(MelodistError):
    """Metric has an empty denominator (e.g. unison-only melody)."""


class LyricMismatch(MelodistError):
    """Two scores do not carry the same lyric syllable sequence."""


class ProviderUnavailable(MelodistError):
    """Lyrics provider could not be reached after retries."""


class AuthFailure(MelodistError):
    """Lyrics provider credential missing or rejected."""


class EmptyGeneration(MelodistError):
    """Lyrics provider returned no usable lyric lines."""


class ConfigError(MelodistError):
    """Pitch-sampler configuration file is invalid."""
