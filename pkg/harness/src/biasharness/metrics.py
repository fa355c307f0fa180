"""Classification metrics computed from a confusion matrix."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalScores:
    """Accuracy, per-class precision/recall/F1 and micro-F1 for one split.

    ``confusion`` has one row per true label and one column per predicted
    label, in label order; it is None on seed-averaged scores, whose scalar
    fields are plain arithmetic means.
    """

    accuracy: float
    micro_f1: float
    per_class: dict[str, ClassScores]
    confusion: tuple[tuple[int, ...], ...] | None

    def values(self) -> list[float]:
        out = [self.accuracy, self.micro_f1]
        for scores in self.per_class.values():
            out.extend((scores.precision, scores.recall, scores.f1))
        return out


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else 0.0


def confusion_matrix(y_true: list[int], y_pred: list[int],
                     n_classes: int) -> tuple[tuple[int, ...], ...]:
    rows = [[0] * n_classes for _ in range(n_classes)]
    for t, p in zip(y_true, y_pred, strict=True):
        rows[t][p] += 1
    return tuple(tuple(row) for row in rows)


def scores_from_confusion(confusion: tuple[tuple[int, ...], ...],
                          labels: tuple[str, ...]) -> EvalScores:
    total = sum(sum(row) for row in confusion)
    correct = sum(confusion[i][i] for i in range(len(labels)))
    per_class = {}
    for i, label in enumerate(labels):
        tp = confusion[i][i]
        precision = _ratio(tp, sum(row[i] for row in confusion))
        recall = _ratio(tp, sum(confusion[i]))
        f1 = (2 * precision * recall / (precision + recall)
              if precision + recall else 0.0)
        per_class[label] = ClassScores(precision, recall, f1)

    # in single-label classification every miss is one FP and one FN, so
    # micro precision, recall and F1 all collapse to the accuracy
    accuracy = _ratio(correct, total)
    return EvalScores(accuracy=accuracy, micro_f1=accuracy,
                      per_class=per_class, confusion=confusion)


def score(y_true: list[int], y_pred: list[int],
          labels: tuple[str, ...]) -> EvalScores:
    return scores_from_confusion(
        confusion_matrix(y_true, y_pred, len(labels)), labels)


def mean_scores(per_seed: list[EvalScores],
                labels: tuple[str, ...]) -> EvalScores:
    """Arithmetic mean of every scalar field across seeds."""
    n = len(per_seed)
    per_class = {
        label: ClassScores(
            precision=sum(s.per_class[label].precision for s in per_seed) / n,
            recall=sum(s.per_class[label].recall for s in per_seed) / n,
            f1=sum(s.per_class[label].f1 for s in per_seed) / n)
        for label in labels
    }
    return EvalScores(
        accuracy=sum(s.accuracy for s in per_seed) / n,
        micro_f1=sum(s.micro_f1 for s in per_seed) / n,
        per_class=per_class, confusion=None)
