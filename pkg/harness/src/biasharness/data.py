"""Loading and audited access for line-delimited task datasets.

The upstream engine exports one JSON object per line with at least the
fields in REQUIRED_FIELDS. The loader validates shape once; afterwards all
record access goes through TaskData.read, which logs every (phase, id,
split) triple so a run can prove that training never touched the test
split.
"""

from __future__ import annotations

import csv
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import SchemaMismatch

REQUIRED_FIELDS = ("id", "task", "split", "label", "text")
SPLITS = ("train", "val", "test")

# label space per task, positive class first
TASK_LABELS = {
    "inf-oth": ("INF", "OTH"),
    "inf-lex": ("INF", "LEX"),
}

SPECIAL_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]")

_WORD = re.compile(r"[a-z0-9]+|[^\sa-z0-9]")


@dataclass(frozen=True)
class Example:
    """One training or evaluation record."""

    id: str
    split: str
    label: str
    text: str


@dataclass
class AuditLog:
    """Append-only record of every example access.

    Each entry is (phase, record id, split). The training loop tags its
    reads with phases like "train-encode" or "val-eval"; the test split may
    only ever appear under "test-eval".
    """

    entries: list[tuple[str, str, str]] = field(default_factory=list)

    def record(self, phase: str, example: Example) -> None:
        self.entries.append((phase, example.id, example.split))

    def reads(self, *, split: str | None = None, phase: str | None = None) -> int:
        return sum(1 for p, _, s in self.entries
                   if (split is None or s == split)
                   and (phase is None or p == phase))

    def test_reads_outside(self, allowed_phase: str = "test-eval") -> int:
        """Test-split accesses from any phase other than final evaluation."""
        return sum(1 for p, _, s in self.entries
                   if s == "test" and p != allowed_phase)

    def write(self, path: Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(("phase", "record_id", "split"))
            writer.writerows(self.entries)


@dataclass
class TaskData:
    """A validated dataset plus the audit log guarding its records."""

    task: str
    labels: tuple[str, ...]
    audit: AuditLog
    _by_split: dict[str, tuple[Example, ...]]

    def count(self, split: str) -> int:
        return len(self._by_split.get(split, ()))

    def read(self, split: str, phase: str) -> Iterator[Example]:
        """Yield the split's records, logging each access under ``phase``."""
        for example in self._by_split.get(split, ()):
            self.audit.record(phase, example)
            yield example


def load_dataset(path: str | Path) -> TaskData:
    """Parse and validate a line-delimited export.

    Raises SchemaMismatch for anything that is not a single-task dataset
    with the required fields, known splits and labels, and a non-empty
    train and test split.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as err:
        raise SchemaMismatch(f"cannot read dataset {path}: {err}") from err

    task = None
    by_split: dict[str, list[Example]] = {s: [] for s in SPLITS}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as err:
            raise SchemaMismatch(f"{path}:{lineno}: not JSON: {err}") from err
        if not isinstance(row, dict):
            raise SchemaMismatch(f"{path}:{lineno}: expected an object")
        missing = [name for name in REQUIRED_FIELDS if name not in row]
        if missing:
            raise SchemaMismatch(
                f"{path}:{lineno}: missing fields {', '.join(missing)}")

        if task is None:
            task = row["task"]
            if task not in TASK_LABELS:
                known = ", ".join(sorted(TASK_LABELS))
                raise SchemaMismatch(
                    f"{path}:{lineno}: unknown task {task!r} (known: {known})")
        elif row["task"] != task:
            raise SchemaMismatch(
                f"{path}:{lineno}: mixed tasks {task!r} and {row['task']!r}")

        if row["split"] not in SPLITS:
            raise SchemaMismatch(
                f"{path}:{lineno}: unknown split {row['split']!r}")
        if row["label"] not in TASK_LABELS[task]:
            raise SchemaMismatch(
                f"{path}:{lineno}: label {row['label']!r} outside task {task}")
        by_split[row["split"]].append(Example(
            id=str(row["id"]), split=row["split"],
            label=row["label"], text=str(row["text"])))

    if task is None:
        raise SchemaMismatch(f"{path}: dataset is empty")
    for split in ("train", "test"):
        if not by_split[split]:
            raise SchemaMismatch(f"{path}: no records in the {split} split")

    return TaskData(task=task, labels=TASK_LABELS[task], audit=AuditLog(),
                    _by_split={s: tuple(rows) for s, rows in by_split.items()})


def build_vocab(data: TaskData, max_size: int = 8000) -> list[str]:
    """Word vocabulary from the train split only, most frequent first.

    Reads go through the audit log under the "vocab" phase, so the log
    still proves the test split stayed untouched.
    """
    counts: Counter[str] = Counter()
    for example in data.read("train", "vocab"):
        counts.update(_WORD.findall(example.text.lower()))
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    words = [token for token, _ in ranked[:max_size - len(SPECIAL_TOKENS)]]
    return list(SPECIAL_TOKENS) + words
