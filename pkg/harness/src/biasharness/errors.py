"""Typed errors raised by the harness."""

from __future__ import annotations


class HarnessError(Exception):
    """Base class for all harness errors."""


class SchemaMismatch(HarnessError):
    """The dataset file does not conform to the expected export shape."""


class ResourceExhausted(HarnessError):
    """Training ran out of memory; reduce batch size or sequence length."""
