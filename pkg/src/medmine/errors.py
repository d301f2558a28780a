"""Exception and warning types shared across the pipeline."""

from __future__ import annotations


class MedmineError(Exception):
    """Base class for all pipeline errors."""


class MalformedRow(MedmineError):
    """A data file row that cannot be parsed; reports file and line number."""

    def __init__(self, path: str, line_no: int, reason: str) -> None:
        self.path = str(path)
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{self.path}:{line_no}: {reason}")


class UnknownTweetId(MedmineError):
    """An annotation or prediction references a tweet id not in the corpus."""


class SpanOutOfBounds(MedmineError):
    """A span does not satisfy 0 <= start < end <= length."""


class SurfaceMismatch(MedmineError):
    """An annotation surface differs from the text slice at its offsets."""


class OverlappingMentions(MedmineError):
    """Two spans of the same tweet overlap."""


class EmptyPool(MedmineError):
    """No mention surfaces available to build an entity pool."""


class NotPositive(MedmineError):
    """Augmentation applied to a tweet without mentions."""


class FetchError(MedmineError):
    """A fetch request for one term failed; the term is skipped."""

    def __init__(self, term: str, reason: str = "") -> None:
        self.term = term
        self.reason = reason
        super().__init__(f"fetch failed for term {term!r}: {reason}" if reason
                         else f"fetch failed for term {term!r}")


class ConfigError(MedmineError):
    """Bad CLI usage, unknown config key, or malformed recipe (exit code 2)."""


class DegenerateSplitWarning(UserWarning):
    """A class landed entirely on one side of a train/validation split."""
