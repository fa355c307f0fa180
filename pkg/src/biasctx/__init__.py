"""Deterministic context augmentation for bias-annotated news corpora."""

from .banc import BancExample, build_all_banc, build_banc
from .ingest import (
    corpus_digest,
    corpus_summary,
    normalize_targets,
    parse_corpus,
    serialize_corpus,
)
from .model import Article, BiasAnnotation, BiasKind, Corpus, Event, Sentence, Source
from .records import AugmentedExample
from .split_task import (
    SplitPlan,
    Task,
    TaskDataset,
    build_task_dataset,
    make_folds,
    sample_fraction,
    target_balanced_test,
)
from .stats_export import Manifest, StatsReport, emit_dataset, report_stats
from .target_context import (
    PairExample,
    Scope,
    TargetGroup,
    build_abta,
    build_all_target_contexts,
    build_ebta,
    collect_target_groups,
)

__version__ = "0.1.0"

__all__ = [
    "Article", "AugmentedExample", "BancExample", "BiasAnnotation", "BiasKind",
    "Corpus", "Event", "Manifest", "PairExample", "Scope", "Sentence", "Source",
    "SplitPlan", "StatsReport", "TargetGroup", "Task", "TaskDataset",
    "build_abta", "build_all_banc", "build_all_target_contexts", "build_banc",
    "build_ebta", "build_task_dataset", "collect_target_groups", "corpus_digest",
    "corpus_summary", "emit_dataset", "make_folds", "normalize_targets",
    "parse_corpus", "report_stats", "sample_fraction", "serialize_corpus",
    "target_balanced_test",
]
