"""Target-aware context builders: within-article and cross-article pairs.

Sentences sharing one (event, target, bias kind) form a group. Within each
group:

* article scope: every source with n >= 2 sentences contributes all
  C(n, 2) unordered pairs; a source with exactly one sentence contributes
  that sentence alone as a single-member example.
* event scope: every unordered pair of distinct sources contributes the
  full cross product of their sentences, so a target appearing in only one
  source contributes nothing at event scope.

Pairs never cross events, never mix targets or kinds, and never grow past
two members. Concatenation order is lower sentence index first within an
article, and FOX < HPO < NYT across articles.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .banc import DEFAULT_SEPARATOR
from .errors import UnknownTarget
from .model import SOURCE_ORDER, BiasKind, Corpus, Sentence, Source


class Scope(str, Enum):
    ABTA = "ABTA"
    EBTA = "EBTA"


@dataclass(frozen=True)
class TargetGroup:
    event_id: str
    target: str
    kind: BiasKind
    per_source: dict[Source, tuple[Sentence, ...]]

    def source_counts(self) -> dict[Source, int]:
        return {src: len(sents) for src, sents in self.per_source.items()}


@dataclass(frozen=True)
class PairExample:
    kind: BiasKind
    target: str
    scope: Scope
    members: tuple[str, ...]
    sources: tuple[Source, ...]
    text: str
    event_id: str


def collect_target_groups(corpus: Corpus) -> list[TargetGroup]:
    """Group annotated sentences by (event, target, kind).

    A sentence participates once per distinct (target, kind) among its
    annotations, so a sentence naming two targets joins two groups. Groups
    are ordered by (event id, kind, target); sentence lists by index.
    """
    groups: dict[tuple[str, str, BiasKind], dict[Source, list[Sentence]]] = {}
    for event in corpus.ordered_events():
        for article in event.ordered_articles():
            for sentence in article.sentences:
                seen: set[tuple[str, BiasKind]] = set()
                for ann in sentence.annotations:
                    key = (ann.target, ann.kind)
                    if key in seen:
                        continue
                    seen.add(key)
                    slot = groups.setdefault(
                        (event.event_id, ann.target, ann.kind), {}
                    ).setdefault(article.source, [])
                    slot.append(sentence)

    ordered = sorted(groups, key=lambda k: (k[0], k[2].value, k[1]))
    return [
        TargetGroup(
            event_id=event_id,
            target=target,
            kind=kind,
            per_source={
                src: tuple(groups[(event_id, target, kind)][src])
                for src in SOURCE_ORDER
                if src in groups[(event_id, target, kind)]
            },
        )
        for event_id, target, kind in ordered
    ]


def build_abta(group: TargetGroup, separator: str = DEFAULT_SEPARATOR) -> list[PairExample]:
    """Within-article pairs; a lone sentence in a source yields a singleton."""
    examples = []
    for src in SOURCE_ORDER:
        sentences = group.per_source.get(src, ())
        if len(sentences) == 1:
            lone = sentences[0]
            examples.append(
                PairExample(
                    kind=group.kind,
                    target=group.target,
                    scope=Scope.ABTA,
                    members=(lone.uid,),
                    sources=(src,),
                    text=lone.text,
                    event_id=group.event_id,
                )
            )
            continue
        for i in range(len(sentences)):
            for j in range(i + 1, len(sentences)):
                first, second = sentences[i], sentences[j]
                examples.append(
                    PairExample(
                        kind=group.kind,
                        target=group.target,
                        scope=Scope.ABTA,
                        members=(first.uid, second.uid),
                        sources=(src, src),
                        text=f"{first.text}{separator}{second.text}",
                        event_id=group.event_id,
                    )
                )
    return examples


def build_ebta(group: TargetGroup, separator: str = DEFAULT_SEPARATOR) -> list[PairExample]:
    """Cross products over every unordered pair of distinct sources."""
    examples = []
    present = [src for src in SOURCE_ORDER if group.per_source.get(src)]
    for a in range(len(present)):
        for b in range(a + 1, len(present)):
            src_a, src_b = present[a], present[b]
            for first in group.per_source[src_a]:
                for second in group.per_source[src_b]:
                    examples.append(
                        PairExample(
                            kind=group.kind,
                            target=group.target,
                            scope=Scope.EBTA,
                            members=(first.uid, second.uid),
                            sources=(src_a, src_b),
                            text=f"{first.text}{separator}{second.text}",
                            event_id=group.event_id,
                        )
                    )
    return examples


def build_all_target_contexts(corpus: Corpus, kind: BiasKind,
                              target_filter: set[str] | None = None,
                              separator: str = DEFAULT_SEPARATOR) -> list[PairExample]:
    """All article- and event-scope pairs of one kind, group by group.

    ``target_filter`` restricts output to the named canonical targets and
    must only name targets that occur in the corpus (any kind).
    """
    if target_filter is not None:
        missing = target_filter - corpus.targets()
        if missing:
            raise UnknownTarget(f"targets not in corpus: {sorted(missing)}")

    examples = []
    for group in collect_target_groups(corpus):
        if group.kind != kind:
            continue
        if target_filter is not None and group.target not in target_filter:
            continue
        examples.extend(build_abta(group, separator))
        examples.extend(build_ebta(group, separator))
    return examples


def per_target_counts(examples: list[PairExample]) -> dict[str, dict[str, int]]:
    """Per-target ABTA/EBTA/total tallies for a built example list."""
    counts: dict[str, dict[str, int]] = {}
    for ex in examples:
        row = counts.setdefault(ex.target, {"ABTA": 0, "EBTA": 0, "total": 0})
        row[ex.scope.value] += 1
        row["total"] += 1
    return counts
