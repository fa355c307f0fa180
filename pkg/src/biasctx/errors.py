"""Typed errors raised by the pipeline.

Every error the engine raises on purpose derives from BiasctxError, so the
CLI can distinguish stage failures (exit 1) from genuine crashes.
"""

from __future__ import annotations


class BiasctxError(Exception):
    """Base class for all engine errors."""


# --- ingest ---------------------------------------------------------------

class MalformedFile(BiasctxError):
    """A corpus file (or the corpus directory itself) cannot be read as records."""


class SchemaViolation(BiasctxError):
    """A record is readable but breaks the input schema (missing field, bad enum, bad index)."""


class DuplicateArticle(BiasctxError):
    """A second article was supplied for the same (event, source) pair."""


class DanglingAnnotation(BiasctxError):
    """An annotation span falls outside its sentence text."""


class AliasCycle(BiasctxError):
    """An alias map image is itself aliased to something else."""


# --- target contexts ------------------------------------------------------

class UnknownTarget(BiasctxError):
    """A target filter names a target that does not occur in the corpus."""


# --- backtranslation ------------------------------------------------------

class UnsupportedPair(BiasctxError):
    """The provider does not support the requested language pair."""


class ProviderUnavailable(BiasctxError):
    """Transport-level provider failure (retryable)."""


class EmptyTranslation(BiasctxError):
    """The provider returned an empty string."""


class BtFailed(BiasctxError):
    """Backtranslation gave up after bounded retries."""

    def __init__(self, message: str, origin_ids: tuple[str, ...] = ()):
        super().__init__(message)
        self.origin_ids = origin_ids


# --- splits and datasets --------------------------------------------------

class TooFewEvents(BiasctxError):
    """The corpus cannot be split into non-empty train/val/test at the requested ratios."""


class InvalidFraction(BiasctxError):
    """Augmentation fraction outside the supported grid."""


class FoldOutOfRange(BiasctxError):
    """Requested fold index is not in the split plan."""


class InfeasibleBalance(BiasctxError):
    """No test-event assignment meets the target-balance tolerance."""


# --- export ---------------------------------------------------------------

class IoFailure(BiasctxError):
    """Dataset or manifest could not be written."""


# --- cli --------------------------------------------------------------------

class UsageError(BiasctxError):
    """Flags or config file values do not form a valid run configuration."""
