"""Shared fixtures for the harness tests."""

from __future__ import annotations

from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def tiny_dataset() -> Path:
    """A 192-record export from the upstream engine, all splits present."""
    return FIXTURES / "tiny.jsonl"
