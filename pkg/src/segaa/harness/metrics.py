"""Accuracy, support-weighted precision/recall/F1, and confusion matrices."""

from __future__ import annotations

import numpy as np

from ..data.schema import SCHEMA, DataError


def confusion_matrix(y_true, y_pred, n_classes) -> np.ndarray:
    """Counts with rows = true class, columns = predicted class."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise DataError(f"label shapes differ: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise DataError("cannot build a confusion matrix from zero examples")
    for name, y in (("true", y_true), ("predicted", y_pred)):
        if y.min() < 0 or y.max() >= n_classes:
            raise DataError(f"{name} labels outside [0, {n_classes})")
    mat = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(mat, (y_true, y_pred), 1)
    return mat


def accuracy_from_confusion(confusion) -> float:
    confusion = np.asarray(confusion)
    return float(np.trace(confusion) / confusion.sum())


def weighted_prf(confusion):
    """Support-weighted (precision, recall, f1) from a confusion matrix.

    Per-class precision is diag/column-sum and recall diag/row-sum, each 0
    when its denominator is 0; classes are then averaged with weights equal
    to their true-class support, so empty classes contribute nothing.
    """
    confusion = np.asarray(confusion, dtype=np.float64)
    diag = np.diagonal(confusion)
    col = confusion.sum(axis=0)
    row = confusion.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(col > 0, diag / np.where(col > 0, col, 1), 0.0)
        recall = np.where(row > 0, diag / np.where(row > 0, row, 1), 0.0)
        pr = precision + recall
        f1 = np.where(pr > 0, 2 * precision * recall / np.where(pr > 0, pr, 1), 0.0)
    weights = row / row.sum()
    return (float(weights @ precision), float(weights @ recall), float(weights @ f1))


def target_metrics(y_true, y_pred, target) -> dict:
    """The per-target report block: accuracy, weighted P/R/F1, confusion."""
    confusion = confusion_matrix(y_true, y_pred, SCHEMA.cardinality(target))
    precision, recall, f1 = weighted_prf(confusion)
    return {
        "accuracy": accuracy_from_confusion(confusion),
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "confusion": confusion.tolist(),
    }


def evaluate(net, x, y) -> dict:
    """Per-target metric blocks for a trained network on a held-out set."""
    if len(x) == 0:
        raise DataError("cannot evaluate on an empty test set")
    probs = net.forward(net.prepare_input(x), train=False)
    return {
        target: target_metrics(y[target], net.predict(probs, target), target)
        for target in net.targets
    }
