"""Canonical in-memory corpus model.

The corpus is a hierarchy: Corpus -> Event -> Article -> Sentence, where an
event groups up to three articles, one per news source (FOX, HPO, NYT).
Sentences carry zero or more bias annotations, each naming a bias kind
(INF or LEX), a target entity, and an optional character span.

All model objects are frozen: once a corpus is built it is immutable and
safe to share across threads. Downstream builders treat it as read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Source(str, Enum):
    """News outlet of an article. Canonical order is FOX < HPO < NYT."""

    FOX = "FOX"
    HPO = "HPO"
    NYT = "NYT"


SOURCE_ORDER: tuple[Source, ...] = (Source.FOX, Source.HPO, Source.NYT)


class BiasKind(str, Enum):
    """Kind of bias an annotation marks: informational or lexical."""

    INF = "INF"
    LEX = "LEX"


@dataclass(frozen=True)
class BiasAnnotation:
    """One bias span on a sentence.

    The span, when present, is (start_char, end_char) within the sentence
    text with 0 <= start < end <= len(text). Builders operate on whole
    sentences; spans are preserved but never sliced.
    """

    kind: BiasKind
    target: str
    span: tuple[int, int] | None = None


@dataclass(frozen=True)
class Sentence:
    article_id: str
    index: int
    text: str
    annotations: tuple[BiasAnnotation, ...] = ()

    @property
    def uid(self) -> str:
        """Corpus-wide stable sentence id, e.g. ``18_fox:5``."""
        return f"{self.article_id}:{self.index}"

    def kinds(self) -> frozenset[BiasKind]:
        """Bias kinds present on this sentence (possibly empty)."""
        return frozenset(a.kind for a in self.annotations)

    def has_kind(self, kind: BiasKind) -> bool:
        return any(a.kind == kind for a in self.annotations)


def article_id(event_id: str, source: Source) -> str:
    """Stable article id, identical to the article's file stem."""
    return f"{event_id}_{source.value.lower()}"


@dataclass(frozen=True)
class Article:
    event_id: str
    source: Source
    sentences: tuple[Sentence, ...]

    @property
    def article_id(self) -> str:
        return article_id(self.event_id, self.source)


@dataclass(frozen=True)
class Event:
    """An event groups the articles covering one story, keyed by source."""

    event_id: str
    articles: dict[Source, Article] = field(default_factory=dict)

    def ordered_articles(self) -> list[Article]:
        return [self.articles[s] for s in SOURCE_ORDER if s in self.articles]


@dataclass(frozen=True)
class Corpus:
    """Immutable validated corpus plus the alias map that normalized it."""

    events: dict[str, Event]
    alias_map: dict[str, str] = field(default_factory=dict)

    def ordered_events(self) -> list[Event]:
        return [self.events[eid] for eid in sorted(self.events)]

    def iter_articles(self):
        """Articles in canonical (event id, source) order."""
        for event in self.ordered_events():
            yield from event.ordered_articles()

    def iter_sentences(self):
        for article in self.iter_articles():
            yield from article.sentences

    def targets(self) -> set[str]:
        """All annotation targets occurring anywhere in the corpus."""
        found: set[str] = set()
        for sentence in self.iter_sentences():
            for ann in sentence.annotations:
                found.add(ann.target)
        return found

    def sentence_by_uid(self, uid: str) -> Sentence:
        for sentence in self.iter_sentences():
            if sentence.uid == uid:
                return sentence
        raise KeyError(uid)
