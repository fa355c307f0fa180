from __future__ import annotations

from pathlib import Path

import pytest

from biasctx import parse_corpus

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def e18e22():
    return parse_corpus(FIXTURES / "e18e22")


@pytest.fixture(scope="session")
def bancdemo():
    return parse_corpus(FIXTURES / "bancdemo")
