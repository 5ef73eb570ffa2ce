"""Confusion-matrix classification metrics: accuracy, Cohen's kappa, F1.

The headline "F1" is micro-averaged, which for single-label multiclass
classification is identical to overall accuracy; macro F1 is reported as a
supplement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ConfusionMatrix", "RunMetrics", "confusion", "compute_metrics"]


@dataclass(frozen=True)
class ConfusionMatrix:
    """counts[true][pred] over C classes."""

    counts: np.ndarray
    num_classes: int

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class RunMetrics:
    """Overall accuracy, Cohen's kappa, micro F1 (= accuracy), macro F1."""

    overall_accuracy: float
    kappa: float
    f1_micro: float
    f1_macro: float
    kappa_degenerate: bool = False


def confusion(predictions, labels, num_classes: int) -> ConfusionMatrix:
    """Tally counts[true][pred]; inputs are equal-length class-index arrays."""
    predictions = np.asarray(predictions, dtype=np.int64).ravel()
    labels = np.asarray(labels, dtype=np.int64).ravel()
    if predictions.shape != labels.shape:
        raise ValueError(
            f"length mismatch: {predictions.size} predictions vs {labels.size} labels"
        )
    if predictions.size == 0:
        raise ValueError("need at least one sample")
    for name, arr in (("predictions", predictions), ("labels", labels)):
        if arr.min() < 0 or arr.max() >= num_classes:
            raise ValueError(f"{name} contain classes outside [0, {num_classes})")
    counts = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(counts, (labels, predictions), 1)
    return ConfusionMatrix(counts=counts, num_classes=int(num_classes))


def compute_metrics(cm: ConfusionMatrix) -> RunMetrics:
    """Metrics from a confusion matrix.

    kappa = (p_o - p_e) / (1 - p_e) with p_e from row/column marginals; when
    p_e = 1 (all mass in one cell) kappa is reported as 0 with the
    ``kappa_degenerate`` flag set.  Macro F1 averages classes that appear in
    either the rows or the columns; a class with an empty precision+recall
    denominator contributes 0.
    """
    counts = cm.counts
    total = cm.total
    if total <= 0:
        raise ValueError("confusion matrix is empty")
    diag = np.diag(counts)
    row = counts.sum(axis=1)
    col = counts.sum(axis=0)

    p_o = diag.sum() / total
    pe_num = int((row.astype(object) * col.astype(object)).sum())
    degenerate = pe_num == total * total
    if degenerate:
        kappa = 0.0
    else:
        p_e = pe_num / (total * total)
        kappa = (p_o - p_e) / (1.0 - p_e)

    # Micro F1 from pooled counts; algebraically equal to accuracy here.
    micro_prec = diag.sum() / total
    micro_rec = diag.sum() / total
    f1_micro = (
        0.0
        if micro_prec + micro_rec == 0.0
        else 2.0 * micro_prec * micro_rec / (micro_prec + micro_rec)
    )

    active = (row + col) > 0
    f1_per_class = np.zeros(cm.num_classes)
    denom = 2 * diag + (col - diag) + (row - diag)
    nonzero = denom > 0
    f1_per_class[nonzero] = 2.0 * diag[nonzero] / denom[nonzero]
    f1_macro = float(f1_per_class[active].mean()) if active.any() else 0.0

    return RunMetrics(
        overall_accuracy=float(p_o),
        kappa=float(kappa),
        f1_micro=float(f1_micro),
        f1_macro=f1_macro,
        kappa_degenerate=degenerate,
    )
