"""Fine-tune an encoder on one exported dataset and report seed averages.

The protocol: train on the train split, after every epoch score the val
split and remember the weights with the best positive-class F1, then
evaluate those weights once on the test split. Each configured seed runs
the whole loop; the report carries per-seed scores plus their arithmetic
mean. Every record access is logged, so the audit can show the test split
was read only by the final evaluation.
"""

from __future__ import annotations

import csv
import random
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import torch

from .data import AuditLog, TaskData, load_dataset
from .encoder import EncoderBundle, resolve_encoder
from .errors import ResourceExhausted
from .metrics import EvalScores, mean_scores, score

POSITIVE_CLASS = "INF"


@dataclass(frozen=True)
class TrainConfig:
    dataset: Path
    learning_rate: float = 5e-5
    batch_size: int = 32
    max_epochs: int = 15
    seeds: tuple[int, ...] = (0, 1, 2)
    encoder: str = "bert-base-uncased"
    max_seq_len: int = 256

    def validate(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if self.batch_size < 1 or self.max_epochs < 1:
            raise ValueError("batch size and max epochs must be at least 1")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if self.max_seq_len < 8:
            raise ValueError("max sequence length must be at least 8")


@dataclass(frozen=True)
class SeedRun:
    seed: int
    best_epoch: int
    selection_f1: float
    test: EvalScores


@dataclass(frozen=True)
class MetricsReport:
    task: str
    labels: tuple[str, ...]
    runs: tuple[SeedRun, ...]
    mean: EvalScores


@contextmanager
def _oom_guard(config: TrainConfig):
    try:
        yield
    except (MemoryError, RuntimeError) as err:
        if isinstance(err, RuntimeError) and "out of memory" not in str(err).lower():
            raise
        raise ResourceExhausted(
            f"out of memory at batch size {config.batch_size} and sequence "
            f"length {config.max_seq_len}; reduce one of them") from err


def _encode(bundle: EncoderBundle, data: TaskData, split: str, phase: str,
            max_seq_len: int):
    """Tokenize one split; truncation drops tokens from the tail."""
    examples = list(data.read(split, phase))
    if not examples:
        return None
    enc = bundle.tokenizer(
        [e.text for e in examples], truncation=True, max_length=max_seq_len,
        padding="longest", return_tensors="pt")
    label_ids = {label: i for i, label in enumerate(data.labels)}
    return dict(enc), torch.tensor([label_ids[e.label] for e in examples])


def _evaluate(model, encoded, labels: tuple[str, ...],
              batch_size: int) -> EvalScores:
    inputs, y_true = encoded
    model.eval()
    predictions: list[int] = []
    with torch.no_grad():
        for start in range(0, len(y_true), batch_size):
            batch = {k: v[start:start + batch_size] for k, v in inputs.items()}
            logits = model(**batch).logits
            predictions.extend(logits.argmax(dim=-1).tolist())
    return score(y_true.tolist(), predictions, labels)


def _train_one_seed(config: TrainConfig, bundle: EncoderBundle,
                    data: TaskData, seed: int) -> SeedRun:
    torch.manual_seed(seed)
    shuffler = random.Random(seed)
    model = bundle.new_model()
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)

    train_inputs, train_labels = _encode(
        bundle, data, "train", "train-encode", config.max_seq_len)
    val_encoded = _encode(bundle, data, "val", "val-eval", config.max_seq_len)

    positive = data.labels.index(POSITIVE_CLASS)
    best_f1 = -1.0
    best_epoch = config.max_epochs
    best_state = None
    order = list(range(len(train_labels)))
    for epoch in range(1, config.max_epochs + 1):
        model.train()
        shuffler.shuffle(order)
        for start in range(0, len(order), config.batch_size):
            picks = order[start:start + config.batch_size]
            batch = {k: v[picks] for k, v in train_inputs.items()}
            loss = model(**batch, labels=train_labels[picks]).loss
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()

        if val_encoded is not None:
            val_scores = _evaluate(model, val_encoded, data.labels,
                                   config.batch_size)
            val_f1 = val_scores.per_class[data.labels[positive]].f1
            if val_f1 > best_f1:
                best_f1, best_epoch = val_f1, epoch
                best_state = {k: v.detach().clone()
                              for k, v in model.state_dict().items()}

    # no val split: keep the final epoch's weights
    if best_state is not None:
        model.load_state_dict(best_state)

    assert data.audit.test_reads_outside() == 0, "test split read before eval"
    test_encoded = _encode(bundle, data, "test", "test-eval", config.max_seq_len)
    test_scores = _evaluate(model, test_encoded, data.labels, config.batch_size)
    return SeedRun(seed=seed, best_epoch=best_epoch,
                   selection_f1=max(best_f1, 0.0), test=test_scores)


def train_eval(config: TrainConfig) -> tuple[MetricsReport, AuditLog]:
    """Run the full protocol; returns the report and the access audit."""
    config.validate()
    data = load_dataset(config.dataset)
    bundle = resolve_encoder(config.encoder, data, config.max_seq_len)

    runs = []
    with _oom_guard(config):
        for seed in config.seeds:
            runs.append(_train_one_seed(config, bundle, data, seed))

    report = MetricsReport(
        task=data.task, labels=data.labels, runs=tuple(runs),
        mean=mean_scores([run.test for run in runs], data.labels))
    assert data.audit.test_reads_outside() == 0
    return report, data.audit


def metrics_rows(report: MetricsReport) -> list[list[str]]:
    """The report as a table, one row per seed plus a mean row."""
    header = ["seed", "accuracy", "micro_f1"]
    for label in report.labels:
        header.extend((f"{label}_precision", f"{label}_recall", f"{label}_f1"))
    header.extend(("best_epoch", "selection_f1"))

    def cells(scores: EvalScores) -> list[str]:
        return [f"{value:.6f}" for value in scores.values()]

    rows = [header]
    for run in report.runs:
        rows.append([str(run.seed), *cells(run.test),
                     str(run.best_epoch), f"{run.selection_f1:.6f}"])
    rows.append(["mean", *cells(report.mean), "", ""])
    return rows


def write_metrics(report: MetricsReport, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(metrics_rows(report))
