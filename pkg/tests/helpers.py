"""Shared corpus constructors for the test suite."""

from __future__ import annotations

import random

from biasctx.model import (
    Article,
    BiasAnnotation,
    BiasKind,
    Corpus,
    Event,
    Sentence,
    Source,
)

Layout = dict[tuple[str, str], list[tuple[str, list[tuple[str, str]]]]]


def build_corpus(layout: Layout) -> Corpus:
    """Corpus from {(event, source): [(text, [(kind, target), ...]), ...]}."""
    events: dict[str, Event] = {}
    for (eid, src), rows in layout.items():
        source = Source(src)
        sentences = []
        for index, (text, anns) in enumerate(rows):
            sentences.append(Sentence(
                article_id=f"{eid}_{src.lower()}",
                index=index,
                text=text,
                annotations=tuple(
                    BiasAnnotation(kind=BiasKind(kind), target=target)
                    for kind, target in anns
                ),
            ))
        event = events.setdefault(eid, Event(event_id=eid))
        event.articles[source] = Article(
            event_id=eid, source=source, sentences=tuple(sentences))
    return Corpus(events=events)


def synth_corpus(n_events: int, seed: int = 0,
                 targets: tuple[str, ...] = ("Avery Cole", "Harbor Trust", "Ridgeline Mills"),
                 sentences_per_article: int = 8,
                 annotation_rate: float = 0.45) -> Corpus:
    """Seeded random corpus with a mix of INF, LEX, dual, and clean sentences."""
    rng = random.Random(seed)
    layout: Layout = {}
    for e in range(n_events):
        eid = f"e{e:02d}"
        for src in ("FOX", "HPO", "NYT"):
            rows = []
            for i in range(sentences_per_article):
                text = f"Sentence {i} of {eid} {src} reporting on local matters."
                anns: list[tuple[str, str]] = []
                if rng.random() < annotation_rate:
                    kind = rng.choice(("INF", "LEX"))
                    anns.append((kind, rng.choice(targets)))
                    if rng.random() < 0.15:
                        other = "LEX" if kind == "INF" else "INF"
                        anns.append((other, rng.choice(targets)))
                rows.append((text, anns))
            layout[(eid, src)] = rows
    return build_corpus(layout)
