"""Bias-aware neighborhood context builder.

For every sentence annotated with the requested bias kind, emit one example
that concatenates the sentence with its immediate neighbors, keeping a
neighbor only when its labels are compatible with the anchor's kind. A
neighbor is compatible when it carries no annotation at all or only
annotations of the same kind; anything carrying the opposite kind would
inject ambiguous content and is excluded. First and last sentences simply
have one fewer neighbor to check, and an anchor flanked by incompatible
sentences on both sides is emitted alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Article, BiasKind, Corpus, Sentence

DEFAULT_SEPARATOR = " "


@dataclass(frozen=True)
class BancExample:
    kind: BiasKind
    anchor: str
    members: tuple[str, ...]
    text: str
    event_id: str
    article_id: str
    anchor_index: int
    member_indices: tuple[int, ...]


def neighbor_compatible(sentence: Sentence, kind: BiasKind) -> bool:
    """A neighbor joins the window iff it carries no opposite-kind annotation."""
    return all(a.kind == kind for a in sentence.annotations)


def build_banc(article: Article, kind: BiasKind,
               separator: str = DEFAULT_SEPARATOR) -> list[BancExample]:
    """One window per ``kind``-annotated sentence, in anchor-index order."""
    examples = []
    sentences = article.sentences
    for i, anchor in enumerate(sentences):
        if not anchor.has_kind(kind):
            continue
        indices = [i]
        if i > 0 and neighbor_compatible(sentences[i - 1], kind):
            indices.insert(0, i - 1)
        if i + 1 < len(sentences) and neighbor_compatible(sentences[i + 1], kind):
            indices.append(i + 1)
        members = tuple(sentences[j] for j in indices)
        examples.append(
            BancExample(
                kind=kind,
                anchor=anchor.uid,
                members=tuple(s.uid for s in members),
                text=separator.join(s.text for s in members),
                event_id=article.event_id,
                article_id=article.article_id,
                anchor_index=i,
                member_indices=tuple(indices),
            )
        )
    return examples


def build_all_banc(corpus: Corpus, kind: BiasKind,
                   separator: str = DEFAULT_SEPARATOR) -> list[BancExample]:
    """Corpus-wide windows ordered by (event, source, anchor index)."""
    examples = []
    for article in corpus.iter_articles():
        examples.extend(build_banc(article, kind, separator))
    return examples
