"""Best-map accuracy and normalized mutual information."""
from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DimensionError


def contingency(pred, truth):
    """Counts table with predicted clusters as rows and true classes as columns."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise DimensionError(f"label vectors differ in shape: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise DimensionError("label vectors are empty")
    _, p_idx = np.unique(pred, return_inverse=True)
    _, t_idx = np.unique(truth, return_inverse=True)
    table = np.zeros((p_idx.max() + 1, t_idx.max() + 1), dtype=np.int64)
    np.add.at(table, (p_idx, t_idx), 1)
    return table


def accuracy(pred, truth):
    """Fraction of points matched under the best one-to-one map of
    predicted clusters onto true classes (Hungarian assignment)."""
    table = contingency(pred, truth)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum()) / table.sum()


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(pred, truth):
    """Mutual information over the geometric mean of the two entropies (natural log).

    Two single-cluster partitions score 1; if exactly one partition has
    zero entropy the score is 0.
    """
    table = contingency(pred, truth)
    n = table.sum()
    h_pred = _entropy(table.sum(axis=1), n)
    h_true = _entropy(table.sum(axis=0), n)
    if h_pred == 0.0 and h_true == 0.0:
        return 1.0
    if h_pred == 0.0 or h_true == 0.0:
        return 0.0
    pij = table / n
    outer = np.outer(table.sum(axis=1), table.sum(axis=0)) / (n * n)
    nz = pij > 0
    mi = float((pij[nz] * np.log(pij[nz] / outer[nz])).sum())
    return float(min(1.0, max(0.0, mi / np.sqrt(h_pred * h_true))))
