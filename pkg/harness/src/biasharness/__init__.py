"""Transformer fine-tuning harness for line-delimited bias datasets."""

from .data import AuditLog, Example, TaskData, build_vocab, load_dataset
from .errors import HarnessError, ResourceExhausted, SchemaMismatch
from .metrics import (
    ClassScores,
    EvalScores,
    confusion_matrix,
    mean_scores,
    score,
    scores_from_confusion,
)
from .train import (
    MetricsReport,
    SeedRun,
    TrainConfig,
    metrics_rows,
    train_eval,
    write_metrics,
)

__version__ = "0.1.0"

__all__ = [
    "AuditLog",
    "ClassScores",
    "EvalScores",
    "Example",
    "HarnessError",
    "MetricsReport",
    "ResourceExhausted",
    "SchemaMismatch",
    "SeedRun",
    "TaskData",
    "TrainConfig",
    "build_vocab",
    "confusion_matrix",
    "load_dataset",
    "mean_scores",
    "metrics_rows",
    "score",
    "scores_from_confusion",
    "train_eval",
    "write_metrics",
]
