"""Parse, validate, normalize, and serialize BASIL-shaped corpora.

Input layout
------------
A corpus is a directory of UTF-8 JSON-lines files, one file per article,
conventionally named ``<event>_<source>.jsonl`` (source lowercase in the
filename, uppercase in records). The records are authoritative: every line
of a file must agree on (event, source), and a second file for the same
pair raises DuplicateArticle. Each line is one sentence record:

    {"event": "18", "source": "FOX", "index": 0, "text": "...",
     "annotations": [{"kind": "INF", "target": "Barack Obama",
                      "start": 10, "end": 42}]}

Records must list sentences in order, with contiguous indices from 0.
The machine-readable contract ships with the package as
``schemas/article_record.schema.json``; validation here raises typed
errors instead of generic schema failures.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .errors import (
    AliasCycle,
    DanglingAnnotation,
    DuplicateArticle,
    MalformedFile,
    SchemaViolation,
)
from .model import Article, BiasAnnotation, BiasKind, Corpus, Event, Sentence, Source

RECORD_FIELDS = ("event", "source", "index", "text", "annotations")
ANNOTATION_FIELDS = ("kind", "target", "start", "end")


@dataclass(frozen=True)
class InputSchema:
    """Descriptor of the record format accepted by the parser.

    The default mirrors the shipped JSON Schema file; a custom descriptor
    can rename fields or restrict enums for non-standard dumps.
    """

    required: tuple[str, ...] = ("event", "source", "index", "text")
    sources: tuple[str, ...] = tuple(s.value for s in Source)
    kinds: tuple[str, ...] = tuple(k.value for k in BiasKind)

    @staticmethod
    def schema_text() -> str:
        """Raw JSON Schema shipped with the package."""
        return (
            resources.files("biasctx.schemas")
            .joinpath("article_record.schema.json")
            .read_text(encoding="utf-8")
        )


DEFAULT_SCHEMA = InputSchema()


def parse_corpus(root_path: str | Path, schema: InputSchema | None = None,
                 threads: int = 1) -> Corpus:
    """Parse every ``*.jsonl`` article file under ``root_path``.

    Raises MalformedFile, SchemaViolation, DuplicateArticle, or
    DanglingAnnotation. Article and event ids come from the records and are
    stable across runs.
    """
    schema = schema or DEFAULT_SCHEMA
    root = Path(root_path)
    if not root.is_dir():
        raise MalformedFile(f"corpus root is not a directory: {root}")
    paths = sorted(root.glob("*.jsonl"))
    if not paths:
        raise MalformedFile(f"no articles found under {root}")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            articles = list(pool.map(lambda p: _parse_article_file(p, schema), paths))
    else:
        articles = [_parse_article_file(p, schema) for p in paths]

    events: dict[str, Event] = {}
    for article in articles:
        event = events.setdefault(article.event_id, Event(event_id=article.event_id))
        if article.source in event.articles:
            raise DuplicateArticle(
                f"second article for event {article.event_id!r} source {article.source.value}"
            )
        event.articles[article.source] = article
    return Corpus(events=events)


def _parse_article_file(path: Path, schema: InputSchema) -> Article:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise MalformedFile(f"{path}: {exc}") from exc

    sentences: list[Sentence] = []
    event_id: str | None = None
    source: Source | None = None
    position = 0
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedFile(f"{path}:{lineno}: unparseable record: {exc}") from exc
        if not isinstance(record, dict):
            raise MalformedFile(f"{path}:{lineno}: record is not an object")

        sentence, rec_event, rec_source = _validate_record(record, schema, f"{path}:{lineno}")
        if event_id is None:
            event_id, source = rec_event, rec_source
        elif (rec_event, rec_source) != (event_id, source):
            raise SchemaViolation(
                f"{path}:{lineno}: record belongs to {rec_event}/{rec_source.value}, "
                f"file started as {event_id}/{source.value}"
            )
        if sentence.index != position:
            raise SchemaViolation(
                f"{path}:{lineno}: expected index {position}, got {sentence.index}"
            )
        sentences.append(sentence)
        position += 1

    if event_id is None or source is None:
        raise MalformedFile(f"{path}: no records")
    return Article(event_id=event_id, source=source, sentences=tuple(sentences))


def _validate_record(record: dict, schema: InputSchema,
                     where: str) -> tuple[Sentence, str, Source]:
    for name in schema.required:
        if name not in record:
            raise SchemaViolation(f"{where}: missing field {name!r}")
    unknown = set(record) - set(RECORD_FIELDS)
    if unknown:
        raise SchemaViolation(f"{where}: unknown fields {sorted(unknown)}")

    event = record["event"]
    if not isinstance(event, str) or not event:
        raise SchemaViolation(f"{where}: event must be a non-empty string")
    if record["source"] not in schema.sources:
        raise SchemaViolation(f"{where}: bad source {record['source']!r}")
    source = Source(record["source"])
    index = record["index"]
    if not isinstance(index, int) or isinstance(index, bool) or index < 0:
        raise SchemaViolation(f"{where}: index must be a non-negative integer")
    text = record["text"]
    if not isinstance(text, str) or not text.strip():
        raise SchemaViolation(f"{where}: text must be non-empty after trimming")

    annotations = []
    for ann in record.get("annotations", []):
        if not isinstance(ann, dict):
            raise SchemaViolation(f"{where}: annotation is not an object")
        unknown = set(ann) - set(ANNOTATION_FIELDS)
        if unknown:
            raise SchemaViolation(f"{where}: unknown annotation fields {sorted(unknown)}")
        if ann.get("kind") not in schema.kinds:
            raise SchemaViolation(f"{where}: bad annotation kind {ann.get('kind')!r}")
        target = ann.get("target")
        if not isinstance(target, str) or not target.strip():
            raise SchemaViolation(f"{where}: annotation target must be non-empty")
        span = None
        if ("start" in ann) != ("end" in ann):
            raise SchemaViolation(f"{where}: span needs both start and end")
        if "start" in ann:
            start, end = ann["start"], ann["end"]
            if not isinstance(start, int) or not isinstance(end, int):
                raise SchemaViolation(f"{where}: span offsets must be integers")
            if not (0 <= start < end <= len(text)):
                raise DanglingAnnotation(
                    f"{where}: span ({start}, {end}) outside sentence of length {len(text)}"
                )
            span = (start, end)
        annotations.append(BiasAnnotation(kind=BiasKind(ann["kind"]), target=target, span=span))

    sentence = Sentence(
        article_id=f"{event}_{source.value.lower()}",
        index=index,
        text=text,
        annotations=tuple(annotations),
    )
    return sentence, event, source


def serialize_corpus(corpus: Corpus, out_dir: str | Path) -> list[Path]:
    """Write the corpus back to canonical article files; returns the paths.

    ``parse_corpus(serialize_corpus(c)) == c`` up to alias-map metadata.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for article in corpus.iter_articles():
        path = out / f"{article.article_id}.jsonl"
        with path.open("w", encoding="utf-8") as fh:
            for sentence in article.sentences:
                fh.write(json.dumps(_sentence_record(article, sentence), ensure_ascii=False))
                fh.write("\n")
        written.append(path)
    return written


def _sentence_record(article: Article, sentence: Sentence) -> dict:
    annotations = []
    for ann in sentence.annotations:
        rec = {"kind": ann.kind.value, "target": ann.target}
        if ann.span is not None:
            rec["start"], rec["end"] = ann.span
        annotations.append(rec)
    return {
        "event": article.event_id,
        "source": article.source.value,
        "index": sentence.index,
        "text": sentence.text,
        "annotations": annotations,
    }


def corpus_digest(corpus: Corpus) -> str:
    """sha256 over the canonical serialization, stable across runs."""
    digest = hashlib.sha256()
    for article in corpus.iter_articles():
        for sentence in article.sentences:
            digest.update(
                json.dumps(_sentence_record(article, sentence),
                           ensure_ascii=False, sort_keys=True).encode("utf-8"))
            digest.update(b"\n")
    return digest.hexdigest()


def normalize_targets(corpus: Corpus, alias_map: dict[str, str]) -> Corpus:
    """Replace every annotation target by its canonical name.

    The map must be functional with a canonical image: a raw name maps to
    one canonical name, and a canonical name may not itself be aliased to a
    different name (AliasCycle). Annotation counts are conserved; merged
    raws share one canonical target afterwards.
    """
    for raw, canonical in alias_map.items():
        if canonical in alias_map and alias_map[canonical] != canonical:
            raise AliasCycle(
                f"canonical name {canonical!r} (image of {raw!r}) is itself aliased "
                f"to {alias_map[canonical]!r}"
            )
    if not alias_map:
        return corpus

    events: dict[str, Event] = {}
    for eid in sorted(corpus.events):
        event = corpus.events[eid]
        new_event = Event(event_id=eid)
        for src in sorted(event.articles, key=lambda s: s.value):
            article = event.articles[src]
            new_sentences = tuple(
                replace(
                    s,
                    annotations=tuple(
                        replace(a, target=alias_map.get(a.target, a.target))
                        for a in s.annotations
                    ),
                )
                for s in article.sentences
            )
            new_event.articles[src] = replace(article, sentences=new_sentences)
        events[eid] = new_event
    merged = dict(corpus.alias_map)
    merged.update(alias_map)
    return Corpus(events=events, alias_map=merged)


@dataclass(frozen=True)
class CorpusSummary:
    """Deterministic corpus statistics: per-kind, per-target, per-event."""

    sentence_count: int
    kind_counts: dict[str, int]
    target_counts: list[tuple[str, int]] = field(default_factory=list)
    event_article_counts: list[tuple[str, int]] = field(default_factory=list)


def corpus_summary(corpus: Corpus) -> CorpusSummary:
    """Count sentences per kind and per target, and articles per event.

    Kind counts are sentence counts (a sentence carrying both kinds counts
    once under each). Target counts are distinct sentences annotated with
    the target, any kind. Ordering: events by id, targets lexicographic.
    """
    kind_counts = {k.value: 0 for k in BiasKind}
    target_sentences: dict[str, set[str]] = {}
    total = 0
    for sentence in corpus.iter_sentences():
        total += 1
        for kind in sentence.kinds():
            kind_counts[kind.value] += 1
        for ann in sentence.annotations:
            target_sentences.setdefault(ann.target, set()).add(sentence.uid)
    return CorpusSummary(
        sentence_count=total,
        kind_counts=kind_counts,
        target_counts=[(t, len(target_sentences[t])) for t in sorted(target_sentences)],
        event_article_counts=[
            (eid, len(corpus.events[eid].articles)) for eid in sorted(corpus.events)
        ],
    )
