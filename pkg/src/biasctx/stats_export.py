"""Corpus statistics tables and dataset export with manifests.

The stats side reproduces the bookkeeping used to sanity-check context
generation: distinct bias sentences and pair-context counts per target and
kind, per event, and corpus-wide. The export side writes datasets as
line-delimited JSON or CSV with a fixed column order and a manifest whose
run id is a content hash, so identical inputs yield byte-identical outputs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IoFailure
from .model import Corpus
from .records import ABTA
from .split_task import SPLIT_ORDER, TaskDataset
from .target_context import PairExample

EXPORT_FIELDS = ("id", "task", "split", "label", "provenance", "event",
                 "sources", "sentence_ids", "target", "text")


@dataclass(frozen=True)
class StatsRow:
    target: str
    kind: str
    sentence_count: int
    abta: int
    ebta: int

    @property
    def total(self) -> int:
        return self.abta + self.ebta


@dataclass(frozen=True)
class EventStats:
    event_id: str
    kind: str
    abta: int
    ebta: int

    @property
    def total(self) -> int:
        return self.abta + self.ebta


@dataclass(frozen=True)
class StatsReport:
    rows: tuple[StatsRow, ...]
    kind_totals: dict[str, tuple[int, int]] = field(default_factory=dict)
    per_event: tuple[EventStats, ...] = ()


def report_stats(corpus: Corpus, contexts: list[PairExample], top_n: int = 10,
                 targets: set[str] | None = None) -> StatsReport:
    """Tabulate bias sentences against the pair contexts built from them.

    Rows cover the top_n targets by distinct annotated sentences (any kind),
    one row per kind a target actually carries, INF before LEX; ``targets``
    restricts the ranking to the named ones. kind_totals maps each kind to
    (distinct bias sentences, pair contexts built).
    """
    tk_sentences: dict[tuple[str, str], set[str]] = {}
    target_sentences: dict[str, set[str]] = {}
    kind_sentences: dict[str, set[str]] = {}
    for sentence in corpus.iter_sentences():
        for ann in sentence.annotations:
            key = (ann.target, ann.kind.value)
            tk_sentences.setdefault(key, set()).add(sentence.uid)
            target_sentences.setdefault(ann.target, set()).add(sentence.uid)
            kind_sentences.setdefault(ann.kind.value, set()).add(sentence.uid)

    tk_contexts: dict[tuple[str, str], dict[str, int]] = {}
    event_contexts: dict[tuple[str, str], dict[str, int]] = {}
    kind_contexts: dict[str, int] = {}
    for ctx in contexts:
        scope = ctx.scope.value
        per_tk = tk_contexts.setdefault((ctx.target, ctx.kind.value), {ABTA: 0})
        per_tk[scope] = per_tk.get(scope, 0) + 1
        per_event = event_contexts.setdefault((ctx.event_id, ctx.kind.value), {})
        per_event[scope] = per_event.get(scope, 0) + 1
        kind_contexts[ctx.kind.value] = kind_contexts.get(ctx.kind.value, 0) + 1

    ranked = sorted(target_sentences, key=lambda t: (-len(target_sentences[t]), t))
    if targets is not None:
        ranked = [t for t in ranked if t in targets]
    rows = []
    for target in ranked[:top_n]:
        for kind in ("INF", "LEX"):
            if (target, kind) not in tk_sentences:
                continue
            counts = tk_contexts.get((target, kind), {})
            rows.append(StatsRow(
                target=target, kind=kind,
                sentence_count=len(tk_sentences[(target, kind)]),
                abta=counts.get("ABTA", 0), ebta=counts.get("EBTA", 0),
            ))

    kind_totals = {
        kind: (len(kind_sentences.get(kind, ())), kind_contexts.get(kind, 0))
        for kind in sorted(set(kind_sentences) | set(kind_contexts))
    }
    per_event = tuple(
        EventStats(event_id=eid, kind=kind,
                   abta=event_contexts[(eid, kind)].get("ABTA", 0),
                   ebta=event_contexts[(eid, kind)].get("EBTA", 0))
        for eid, kind in sorted(event_contexts)
    )
    return StatsReport(rows=tuple(rows), kind_totals=kind_totals, per_event=per_event)


def render_stats(report: StatsReport) -> str:
    """Plain-text tables, stable line order."""
    lines = [f"{'target':<32} {'kind':<5} {'sentences':>9} {'ABTA':>6} {'EBTA':>6} {'total':>6}"]
    for row in report.rows:
        lines.append(f"{row.target:<32} {row.kind:<5} {row.sentence_count:>9} "
                     f"{row.abta:>6} {row.ebta:>6} {row.total:>6}")
    lines.append("")
    for kind, (sentences, contexts) in report.kind_totals.items():
        lines.append(f"{kind}: {sentences} bias sentences -> {contexts} pair contexts")
    if report.per_event:
        lines.append("")
        for ev in report.per_event:
            lines.append(f"event {ev.event_id} [{ev.kind}]: ABTA {ev.abta} "
                         f"+ EBTA {ev.ebta} = {ev.total}")
    return "\n".join(lines) + "\n"


# --- dataset export ----------------------------------------------------------

@dataclass(frozen=True)
class ManifestFile:
    name: str
    records: int
    sha256: str


@dataclass(frozen=True)
class Manifest:
    run_id: str
    corpus_digest: str | None
    seed: object
    flags: dict
    files: tuple[ManifestFile, ...]

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "corpus_digest": self.corpus_digest,
            "seed": self.seed,
            "flags": self.flags,
            "files": [{"name": f.name, "records": f.records, "sha256": f.sha256}
                      for f in self.files],
        }


def _export_row(record, task: str) -> dict:
    return {
        "id": record.id,
        "task": task,
        "split": record.split,
        "label": record.label,
        "provenance": record.provenance,
        "event": record.event_id,
        "sources": list(record.sources),
        "sentence_ids": list(record.sentence_ids),
        "target": record.target,
        "text": record.text,
    }


def _render_lines(rows: list[dict]) -> str:
    return "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in rows)


def _render_tabular(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EXPORT_FIELDS)
    for row in rows:
        writer.writerow([
            row["id"], row["task"], row["split"], row["label"], row["provenance"],
            row["event"], "+".join(row["sources"]), "+".join(row["sentence_ids"]),
            row["target"] or "", row["text"],
        ])
    return buf.getvalue()


def emit_dataset(dataset: TaskDataset, path: str | Path, format: str = "lines",
                 corpus_digest: str | None = None) -> Manifest:
    """Write the dataset to ``path`` plus a ``<stem>.manifest.json`` sidecar.

    Records are ordered by (split, id) with train before val before test.
    The manifest's run id hashes the configuration and file digests; reruns
    over identical inputs produce identical bytes, manifest included.
    """
    if format not in ("lines", "tabular"):
        raise ValueError(f"format must be 'lines' or 'tabular', got {format!r}")
    out = Path(path)
    ordered = sorted(dataset.records, key=lambda r: (SPLIT_ORDER[r.split], r.id))
    rows = [_export_row(r, dataset.task.value) for r in ordered]
    payload = _render_lines(rows) if format == "lines" else _render_tabular(rows)
    data = payload.encode("utf-8")

    files = (ManifestFile(name=out.name, records=len(rows),
                          sha256=hashlib.sha256(data).hexdigest()),)
    flags = dict(dataset.config)
    seed = flags.get("seed")
    run_id = hashlib.sha256(json.dumps(
        {"corpus_digest": corpus_digest, "flags": flags,
         "files": [(f.name, f.records, f.sha256) for f in files]},
        sort_keys=True, ensure_ascii=False).encode("utf-8")).hexdigest()[:16]
    manifest = Manifest(run_id=run_id, corpus_digest=corpus_digest,
                        seed=seed, flags=flags, files=files)

    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(data)
        manifest_path = out.with_name(out.stem + ".manifest.json")
        manifest_path.write_text(
            json.dumps(manifest.to_dict(), indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"could not write dataset to {out}: {exc}") from exc
    return manifest


def load_dataset_lines(path: str | Path) -> list[dict]:
    """Read a line-delimited export back into row dicts."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"could not read dataset from {path}: {exc}") from exc
    return [json.loads(line) for line in text.splitlines() if line.strip()]
