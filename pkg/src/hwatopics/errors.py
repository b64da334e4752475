"""Exception types raised by the library.

Only `hwatopics.cli` turns these into exit codes; library code raises.
"""


class HwaError(Exception):
    """Base class for every error raised by hwatopics."""


class ConfigError(HwaError, ValueError):
    """Invalid configuration value or config file."""


class InputError(HwaError, OSError):
    """An input file is missing, unreadable, empty or malformed."""


class GroundTruthError(InputError):
    """The ground-truth file violates its schema."""


class InvariantViolation(HwaError, RuntimeError):
    """An internal invariant does not hold (a bug or corrupted input)."""
