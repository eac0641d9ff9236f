"""Out-of-sample assignment by nearest in-sample neighbor in the embedding."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import check_data_matrix, sum_rows
from .errors import DimensionError


@dataclass
class ExtensionResult:
    labels: np.ndarray
    neighbor_indices: np.ndarray
    distances: np.ndarray


def nearest_neighbors(Z, ref, chunk=256):
    """Index of and distance to the nearest column of `ref` for every column of `Z`.

    Brute-force scan, O(d * p * n). Differences are formed explicitly
    rather than via the ``|a|^2 - 2ab + |b|^2`` expansion, so a point
    identical to a reference point gets distance exactly 0. Ties go to
    the lowest reference index.
    """
    n = Z.shape[1]
    idx = np.empty(n, dtype=np.int64)
    dist = np.empty(n)
    for s in range(0, n, chunk):
        blk = Z[:, s:s + chunk]
        d2 = sum_rows((ref[:, :, None] - blk[:, None, :]) ** 2)
        j = np.argmin(d2, axis=0)
        idx[s:s + chunk] = j
        dist[s:s + chunk] = np.sqrt(d2[j, np.arange(blk.shape[1])])
    return idx, dist


def extend(model, X):
    """Label each column of `X` with the cluster of its nearest embedded
    in-sample point.

    `X` must already carry the same preprocessing as the in-sample data.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != model.feature_dim:
        raise DimensionError(
            f"expected data with {model.feature_dim} features, got shape {X.shape}")
    if X.shape[1] == 0:
        empty = np.empty(0, dtype=np.int64)
        return ExtensionResult(empty, empty.copy(), np.empty(0))
    X = check_data_matrix(X, "X")
    Z = model.project(X)
    idx, dist = nearest_neighbors(Z, model.embedded)
    return ExtensionResult(labels=model.labels[idx], neighbor_indices=idx, distances=dist)
