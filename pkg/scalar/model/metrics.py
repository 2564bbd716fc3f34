from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from scalar.errors import ContractViolationError
from scalar.tagset import TAG_ORDER
from scalar.utils import format_duration


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, ...]
    # counts[gold][predicted]
    counts: np.ndarray

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[str, str]], labels: Sequence[str]) -> 'ConfusionMatrix':
        labels = tuple(labels)
        index = {label: i for i, label in enumerate(labels)}
        unknown = {t for pair in pairs for t in pair if t not in index}
        if unknown:
            raise ContractViolationError(f'Tags {sorted(unknown)} are not among the report labels')
        counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
        for gold, predicted in pairs:
            counts[index[gold], index[predicted]] += 1
        return cls(labels=labels, counts=counts)

    @property
    def support(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def predicted_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class TagScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    balanced_accuracy: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    per_tag: dict[str, TagScores]
    wall_clock_seconds: float
    confusion: ConfusionMatrix

    def to_dict(self) -> dict:
        return {
            'summary': {
                'accuracy': self.accuracy,
                'balanced_accuracy': self.balanced_accuracy,
                'weighted_recall': self.weighted_recall,
                'weighted_precision': self.weighted_precision,
                'weighted_f1': self.weighted_f1,
                'wall_clock_seconds': self.wall_clock_seconds,
                'words': self.confusion.total,
            },
            'per_tag': {
                tag: {'precision': s.precision, 'recall': s.recall, 'f1': s.f1, 'support': s.support}
                for tag, s in self.per_tag.items()
            },
            'confusion': {
                'labels': list(self.confusion.labels),
                'counts': self.confusion.counts.tolist(),
            },
        }

    def to_table(self) -> str:
        summary_headers = ['Accuracy', 'Balanced Accuracy', 'Weighted Recall', 'Weighted Precision', 'Weighted F1']
        summary_values = [
            self.accuracy,
            self.balanced_accuracy,
            self.weighted_recall,
            self.weighted_precision,
            self.weighted_f1,
        ]
        widths = [max(len(h), 6) for h in summary_headers]
        lines = [
            '  '.join(h.rjust(w) for h, w in zip(summary_headers, widths)),
            '  '.join(f'{v:.4f}'.rjust(w) for v, w in zip(summary_values, widths)),
            f'Words: {self.confusion.total}  Time: {format_duration(self.wall_clock_seconds)}',
            '',
        ]

        tags = list(self.per_tag)
        column = max(6, *(len(t) for t in tags))
        lines.append(' ' * 10 + ''.join(t.rjust(column + 2) for t in tags))
        for name, attr in (('Precision', 'precision'), ('Recall', 'recall'), ('F1 Score', 'f1')):
            cells = ''.join(f'{getattr(self.per_tag[t], attr):.4f}'.rjust(column + 2) for t in tags)
            lines.append(f'{name:<10}{cells}')
        lines.append(f'{"Support":<10}' + ''.join(str(self.per_tag[t].support).rjust(column + 2) for t in tags))
        return '\n'.join(lines)


def _safe_divide(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    out = np.zeros_like(numerator, dtype=np.float64)
    np.divide(numerator, denominator, out=out, where=denominator > 0)
    return out


def evaluate(
    pairs: Sequence[tuple[str, str]],
    elapsed: float,
    labels: Sequence[str] = TAG_ORDER,
) -> MetricReport:
    """Word-level scores for ``(gold, predicted)`` pairs.

    Precision, recall and F1 are 0 where their denominator is 0. Balanced accuracy
    averages recall over the tags that occur in the gold data; weighted scores are
    support-weighted means.
    """
    if not pairs:
        raise ContractViolationError('Cannot evaluate an empty list of predictions')
    if elapsed < 0:
        raise ContractViolationError(f'Elapsed time must be non-negative, got {elapsed}')

    confusion = ConfusionMatrix.from_pairs(pairs, labels)
    correct = np.diag(confusion.counts).astype(np.float64)
    support = confusion.support.astype(np.float64)

    recall = _safe_divide(correct, support)
    precision = _safe_divide(correct, confusion.predicted_totals.astype(np.float64))
    f1 = _safe_divide(2 * precision * recall, precision + recall)

    total = float(confusion.total)
    present = support > 0
    weights = support / total

    per_tag = {
        label: TagScores(
            precision=float(precision[i]),
            recall=float(recall[i]),
            f1=float(f1[i]),
            support=int(support[i]),
        )
        for i, label in enumerate(confusion.labels)
    }
    return MetricReport(
        accuracy=float(correct.sum() / total),
        balanced_accuracy=float(recall[present].mean()),
        weighted_precision=float(np.dot(weights, precision)),
        weighted_recall=float(np.dot(weights, recall)),
        weighted_f1=float(np.dot(weights, f1)),
        per_tag=per_tag,
        wall_clock_seconds=float(elapsed),
        confusion=confusion,
    )
