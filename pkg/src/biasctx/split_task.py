"""Leakage-free cross-validation splits and task dataset assembly.

Splits are made at event granularity: an event's three articles always land
in the same partition, so no augmented context (which never crosses events)
can straddle train and evaluation. Each fold rotates one seeded shuffle of
the event ids and cuts it into train/val/test by largest-remainder rounding
of the requested ratios.

Dataset assembly layers, in order: regular per-sentence records for every
split, then a seeded fraction of the augmentation pool built from train
events only, then backtranslated copies of policy-admitted train records.
Validation and test only ever contain regular records.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from .backtranslate import (
    DEFAULT_PIVOT,
    BtPolicy,
    TranslationProvider,
    backtranslate_pool,
)
from .banc import DEFAULT_SEPARATOR, BancExample, build_all_banc
from .errors import FoldOutOfRange, InfeasibleBalance, InvalidFraction, TooFewEvents
from .model import Article, BiasKind, Corpus, Sentence
from .records import ABTA, BANC, EBTA, REGULAR, AugmentedExample
from .target_context import PairExample, build_all_target_contexts

VALID_FRACTIONS = (0, 10, 20, 30, 40, 50, 100)
AUGMENTATIONS = (BANC, ABTA, EBTA)
SPLIT_ORDER = {"train": 0, "val": 1, "test": 2}


class Task(str, Enum):
    INF_OTH = "inf-oth"
    INF_LEX = "inf-lex"

    @property
    def labels(self) -> tuple[str, str]:
        return ("INF", "OTH") if self is Task.INF_OTH else ("INF", "LEX")


@dataclass(frozen=True)
class Fold:
    train: tuple[str, ...]
    val: tuple[str, ...]
    test: tuple[str, ...]

    def rotation(self) -> tuple[str, ...]:
        return self.train + self.val + self.test


@dataclass(frozen=True)
class SplitPlan:
    k: int
    seed: int | str
    folds: tuple[Fold, ...]


@dataclass(frozen=True)
class TaskDataset:
    task: Task
    fold: int
    records: tuple[AugmentedExample, ...]
    config: dict = field(default_factory=dict)


def largest_remainder(n: int, ratios: tuple[int, ...]) -> tuple[int, ...]:
    """Apportion n items to ratio classes; leftover seats go to the largest
    fractional remainders, earlier classes first on ties."""
    total = sum(ratios)
    quotas = [n * r / total for r in ratios]
    counts = [int(q) for q in quotas]
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[: n - sum(counts)]:
        counts[i] += 1
    return tuple(counts)


def _stream(seed: int | str, *parts: object) -> str:
    """Derived PRNG stream key; str seeds hash deterministically."""
    return "|".join(str(p) for p in (seed, *parts))


def make_folds(corpus: Corpus, k: int = 10, ratios: tuple[int, int, int] = (80, 10, 10),
               seed: int | str = 0) -> SplitPlan:
    """Shuffle events once, then rotate the shuffle per fold and cut it."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    event_ids = sorted(corpus.events)
    n = len(event_ids)
    if n < k:
        raise TooFewEvents(f"{n} events cannot fill {k} folds")
    counts = largest_remainder(n, ratios)
    for name, ratio, count in zip(("train", "val", "test"), ratios, counts):
        if ratio > 0 and count == 0:
            raise TooFewEvents(
                f"{n} events leave the {name} split empty at ratios {ratios}")

    rng = random.Random(_stream(seed, "folds"))
    shuffled = list(event_ids)
    rng.shuffle(shuffled)
    n_train, n_val, _ = counts
    folds = []
    for i in range(k):
        offset = (i * n) // k
        rotated = shuffled[offset:] + shuffled[:offset]
        folds.append(Fold(
            train=tuple(rotated[:n_train]),
            val=tuple(rotated[n_train:n_train + n_val]),
            test=tuple(rotated[n_train + n_val:]),
        ))
    return SplitPlan(k=k, seed=seed, folds=tuple(folds))


def sample_fraction(pool: list, pct: int, seed: int | str) -> list:
    """Prefix of one seeded permutation: ceil(|pool| * pct / 100) items.

    Using a single permutation makes samples nest: the 10% sample is a
    subset of the 30% sample for the same seed. Selected items come back in
    pool order.
    """
    if not 0 <= pct <= 100:
        raise InvalidFraction(f"fraction {pct} outside [0, 100]")
    count = -(-len(pool) * pct // 100)
    indices = list(range(len(pool)))
    random.Random(_stream(seed, "perm")).shuffle(indices)
    return [pool[i] for i in sorted(indices[:count])]


# --- record construction ----------------------------------------------------

def _source_of(article_id: str) -> str:
    return article_id.rsplit("_", 1)[-1].upper()


def _label_for(kind: BiasKind, task: Task) -> str:
    if task is Task.INF_LEX:
        return kind.value
    return "INF" if kind is BiasKind.INF else "OTH"


def _regular_records(task: Task, article: Article, sentence: Sentence,
                     split: str) -> list[AugmentedExample]:
    kinds = frozenset(k.value for k in sentence.kinds())
    if task is Task.INF_OTH:
        label = "INF" if BiasKind.INF in sentence.kinds() else "OTH"
        return [AugmentedExample(
            id=f"reg|{sentence.uid}", text=sentence.text, label=label,
            provenance=REGULAR, event_id=article.event_id,
            sources=(article.source.value,), sentence_ids=(sentence.uid,),
            kinds=kinds, split=split,
        )]
    return [
        AugmentedExample(
            id=f"reg|{kind.value}|{sentence.uid}", text=sentence.text,
            label=kind.value, provenance=REGULAR, event_id=article.event_id,
            sources=(article.source.value,), sentence_ids=(sentence.uid,),
            kinds=frozenset({kind.value}), split=split,
        )
        for kind in (BiasKind.INF, BiasKind.LEX)
        if sentence.has_kind(kind)
    ]


def _banc_record(example: BancExample, task: Task) -> AugmentedExample:
    return AugmentedExample(
        id=f"banc|{example.kind.value}|{example.anchor}",
        text=example.text,
        label=_label_for(example.kind, task),
        provenance=BANC,
        event_id=example.event_id,
        sources=(_source_of(example.article_id),),
        sentence_ids=example.members,
        kinds=frozenset({example.kind.value}),
    )


def _pair_record(example: PairExample, task: Task) -> AugmentedExample:
    return AugmentedExample(
        id=f"{example.scope.value.lower()}|{example.kind.value}|{example.target}"
           f"|{'+'.join(example.members)}",
        text=example.text,
        label=_label_for(example.kind, task),
        provenance=example.scope.value,
        event_id=example.event_id,
        sources=tuple(s.value for s in example.sources),
        sentence_ids=example.members,
        kinds=frozenset({example.kind.value}),
        target=example.target,
    )


def _restrict(corpus: Corpus, event_ids: set[str]) -> Corpus:
    return Corpus(
        events={eid: corpus.events[eid] for eid in corpus.events if eid in event_ids},
        alias_map=corpus.alias_map,
    )


def augmentation_pool(train_corpus: Corpus, task: Task, aug: frozenset[str] | set[str],
                      separator: str = DEFAULT_SEPARATOR,
                      target_filter: set[str] | None = None) -> list[AugmentedExample]:
    """Canonically ordered pool: neighborhood windows first, then target
    pairs, each kind INF before LEX."""
    unknown = set(aug) - set(AUGMENTATIONS)
    if unknown:
        raise ValueError(f"unknown augmentations: {sorted(unknown)}")
    pool: list[AugmentedExample] = []
    if BANC in aug:
        for kind in (BiasKind.INF, BiasKind.LEX):
            pool.extend(_banc_record(b, task)
                        for b in build_all_banc(train_corpus, kind, separator))
    scopes = {s for s in (ABTA, EBTA) if s in aug}
    if scopes:
        for kind in (BiasKind.INF, BiasKind.LEX):
            pairs = build_all_target_contexts(
                train_corpus, kind, target_filter=target_filter, separator=separator)
            pool.extend(_pair_record(p, task) for p in pairs if p.scope.value in scopes)
    return pool


def build_task_dataset(corpus: Corpus, plan: SplitPlan, fold: int, task: Task,
                       aug: frozenset[str] | set[str] = frozenset(), fraction: int = 0,
                       bt: BtPolicy | None = None, seed: int | str = 0,
                       provider: TranslationProvider | None = None,
                       pivot: str = DEFAULT_PIVOT, separator: str = DEFAULT_SEPARATOR,
                       dedup: bool = False, target_filter: set[str] | None = None,
                       bt_fail_threshold: float = 0.0, bt_workers: int = 1) -> TaskDataset:
    """Assemble one fold's dataset for one task.

    Augmentation builders see only train events, so train sentence ids can
    never intersect validation or test sentence ids. Test and validation
    records are always regular.
    """
    if fraction not in VALID_FRACTIONS:
        raise InvalidFraction(f"fraction must be one of {VALID_FRACTIONS}, got {fraction}")
    if not 0 <= fold < len(plan.folds):
        raise FoldOutOfRange(f"fold {fold} not in plan of {len(plan.folds)} folds")
    if bt is not None and provider is None:
        raise ValueError("backtranslation policy set but no provider given")

    fold_spec = plan.folds[fold]
    records: list[AugmentedExample] = []
    for split_name, event_ids in (("train", fold_spec.train),
                                  ("val", fold_spec.val),
                                  ("test", fold_spec.test)):
        for eid in sorted(event_ids):
            for article in corpus.events[eid].ordered_articles():
                for sentence in article.sentences:
                    records.extend(_regular_records(task, article, sentence, split_name))

    train_corpus = _restrict(corpus, set(fold_spec.train))
    pool = augmentation_pool(train_corpus, task, aug, separator, target_filter)
    if dedup:
        pool = [ex for ex in pool
                if not (ex.provenance == ABTA and len(ex.sentence_ids) == 1)]
    sampled = sample_fraction(pool, fraction, _stream(seed, "fold", fold, "sample"))
    records.extend(sampled)

    if bt is not None:
        regular_train = [r for r in records
                         if r.split == "train" and r.provenance == REGULAR]
        bt_inputs = sampled + regular_train
        by_id = {ex.id: ex for ex in bt_inputs}
        bt_examples = backtranslate_pool(
            bt_inputs, bt, provider, pivot=pivot,
            fail_threshold=bt_fail_threshold, max_workers=bt_workers)
        for bt_ex in bt_examples:
            origin = by_id[bt_ex.origin]
            records.append(AugmentedExample(
                id=f"bt|{origin.id}", text=bt_ex.text, label=origin.label,
                provenance=bt_ex.provenance, event_id=origin.event_id,
                sources=origin.sources, sentence_ids=origin.sentence_ids,
                kinds=origin.kinds, target=origin.target, split="train",
            ))

    config = {
        "task": task.value, "fold": fold, "k": plan.k,
        "aug": sorted(aug), "fraction": fraction,
        "bt_policy": bt.value if bt else "none", "pivot": pivot if bt else None,
        "seed": plan.seed if seed is None else seed, "plan_seed": plan.seed,
        "separator": separator, "dedup": dedup,
        "targets": sorted(target_filter) if target_filter else None,
    }
    return TaskDataset(task=task, fold=fold, records=tuple(records), config=config)


# --- target-balanced test reassignment --------------------------------------

def _target_event_counts(corpus: Corpus, targets: set[str]) -> dict[str, dict[str, int]]:
    """Per target, per event: distinct sentences annotated with it (any kind)."""
    counts: dict[str, dict[str, int]] = {t: {} for t in targets}
    for event in corpus.ordered_events():
        for article in event.ordered_articles():
            for sentence in article.sentences:
                for target in {a.target for a in sentence.annotations}:
                    if target in targets:
                        per_event = counts[target]
                        per_event[event.event_id] = per_event.get(event.event_id, 0) + 1
    return counts


def _max_deviation(test_events: set[str], counts: dict[str, dict[str, int]]) -> float:
    totals = {t: sum(per_event.get(e, 0) for e in test_events)
              for t, per_event in counts.items()}
    grand = sum(totals.values())
    if grand == 0:
        return 1.0
    uniform = 1.0 / len(counts)
    return max(abs(c / grand - uniform) for c in totals.values())


def target_balanced_test(corpus: Corpus, plan: SplitPlan, fold: int, targets: set[str],
                         tolerance: float = 0.1) -> SplitPlan:
    """Reassign one fold's test events so the named targets' bias-sentence
    shares of the test set are uniform within ``tolerance``.

    The current assignment is kept when it already balances. Otherwise a
    deterministic greedy selection plus swap improvement searches for a
    same-size test set; InfeasibleBalance when none reaches the tolerance.
    """
    if not targets:
        raise ValueError("targets must be non-empty")
    if not 0 <= fold < len(plan.folds):
        raise FoldOutOfRange(f"fold {fold} not in plan of {len(plan.folds)} folds")
    counts = _target_event_counts(corpus, targets)
    fold_spec = plan.folds[fold]
    n_test = len(fold_spec.test)
    if _max_deviation(set(fold_spec.test), counts) <= tolerance:
        return plan

    all_events = sorted(corpus.events)
    chosen: set[str] = set()
    for _ in range(n_test):
        best = min((e for e in all_events if e not in chosen),
                   key=lambda e: (_max_deviation(chosen | {e}, counts), e))
        chosen.add(best)

    improved = True
    while improved and _max_deviation(chosen, counts) > tolerance:
        improved = False
        current = _max_deviation(chosen, counts)
        best_swap, best_dev = None, current
        for out_event in sorted(chosen):
            for in_event in all_events:
                if in_event in chosen:
                    continue
                candidate = (chosen - {out_event}) | {in_event}
                dev = _max_deviation(candidate, counts)
                if dev < best_dev:
                    best_dev, best_swap = dev, (out_event, in_event)
        if best_swap is not None:
            chosen.remove(best_swap[0])
            chosen.add(best_swap[1])
            improved = True

    if _max_deviation(chosen, counts) > tolerance:
        raise InfeasibleBalance(
            f"no {n_test}-event test set balances {sorted(targets)} "
            f"within {tolerance:.2%}")

    remaining = [e for e in fold_spec.rotation() if e not in chosen]
    n_train = len(fold_spec.train)
    new_fold = Fold(
        train=tuple(remaining[:n_train]),
        val=tuple(remaining[n_train:]),
        test=tuple(sorted(chosen)),
    )
    folds = list(plan.folds)
    folds[fold] = new_fold
    return SplitPlan(k=plan.k, seed=plan.seed, folds=tuple(folds))
