"""Builders for small hand-written datasets used across the tests."""

from __future__ import annotations

import json
from pathlib import Path


def write_rows(path: Path, rows: list[dict]) -> Path:
    path.write_text("\n".join(json.dumps(row) for row in rows) + "\n",
                    encoding="utf-8")
    return path


def minimal_row(**overrides) -> dict:
    row = {"id": "reg|1_fox:0", "task": "inf-oth", "split": "train",
           "label": "OTH", "text": "A plain sentence."}
    row.update(overrides)
    return row
