"""
Classification metrics: confusion matrix, per-class precision and recall,
and the class-proportion weighted F1 score.
"""

from typing import Optional, Sequence

import numpy as np
import pandas as pd

from dftn.errors import DegenerateInputError, DimensionError, ParameterError


def _check(predictions: np.ndarray, labels: np.ndarray, classes: int) -> None:
    if predictions.shape != labels.shape:
        raise DimensionError(
            f"{len(predictions)} predictions for {len(labels)} labels"
        )
    if len(labels) == 0:
        raise DegenerateInputError("metrics need at least one prediction")
    for name, values in (("predictions", predictions), ("labels", labels)):
        if values.min() < 0 or values.max() >= classes:
            raise ParameterError(f"{name} must lie in [0, {classes})")


def confusion_matrix(predictions, labels, classes: int) -> np.ndarray:
    """``cm[true, predicted]`` counts"""
    predictions = np.asarray(predictions, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    _check(predictions, labels, classes)
    cm = np.zeros((classes, classes), dtype=np.int64)
    np.add.at(cm, (labels, predictions), 1)
    return cm


def precision_recall(cm: np.ndarray):
    """Per-class precision and recall; 0 where the denominator is 0"""
    tp = np.diag(cm).astype(np.float64)
    predicted = cm.sum(axis=0)
    actual = cm.sum(axis=1)
    precision = np.divide(tp, predicted, out=np.zeros_like(tp), where=predicted > 0)
    recall = np.divide(tp, actual, out=np.zeros_like(tp), where=actual > 0)
    return precision, recall


def _f1(precision: np.ndarray, recall: np.ndarray) -> np.ndarray:
    total = precision + recall
    return np.divide(
        2.0 * precision * recall, total, out=np.zeros_like(total), where=total > 0
    )


def weighted_f1(predictions, labels, classes: int) -> float:
    """``sum_g w_g * 2 p_g r_g / (p_g + r_g)`` with ``w_g = N_g / N_total``"""
    cm = confusion_matrix(predictions, labels, classes)
    precision, recall = precision_recall(cm)
    weights = cm.sum(axis=1) / cm.sum()
    return float(np.sum(weights * _f1(precision, recall)))


def classification_report(
    predictions, labels, classes: int, class_names: Optional[Sequence[str]] = None
) -> pd.DataFrame:
    """One row per class: support, proportion, precision, recall, f1"""
    cm = confusion_matrix(predictions, labels, classes)
    precision, recall = precision_recall(cm)
    support = cm.sum(axis=1)
    names = list(class_names) if class_names is not None else [str(g) for g in range(classes)]
    return pd.DataFrame(
        {
            "class": names,
            "support": support,
            "proportion": support / support.sum(),
            "precision": precision,
            "recall": recall,
            "f1": _f1(precision, recall),
        }
    )
