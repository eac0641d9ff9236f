"""Linear embedding learned from the sparse codes.

The projection ``W`` keeps the directions along which each point stays
close to its own sparse reconstruction, under the scale constraint
``W^T (Y Y^T + eps I) W = I``. This amounts to the generalized symmetric
eigenproblem

    (Y M Y^T) w = lam (Y Y^T + eps I) w,     M = C + C^T - C^T C,

of which the largest eigenpairs are kept.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dataset import check_data_matrix, column_matmul
from .errors import DegenerateEmbeddingError, DimensionError, NumericalError, ParameterError

RIDGE_SCALE = 1e-8


@dataclass
class ProjectionModel:
    """Everything needed to place new points: ``W`` plus the embedded
    in-sample points and their cluster labels."""

    W: np.ndarray
    eigvals: np.ndarray
    embedded: np.ndarray
    labels: np.ndarray
    ridge: float

    @property
    def d(self) -> int:
        return self.W.shape[1]

    @property
    def feature_dim(self) -> int:
        return self.W.shape[0]

    def project(self, X):
        """``W^T X``, bitwise independent of how the columns of X are batched."""
        return column_matmul(self.W.T, X)


def build_m(codes):
    """``M = C + C^T - C^T C``, symmetrized."""
    C = getattr(codes, "C", codes)
    C = np.asarray(C, dtype=np.float64)
    M = C + C.T - C.T @ C
    return (M + M.T) / 2.0


def ridge_for(Y):
    m = Y.shape[0]
    return RIDGE_SCALE * float(np.trace(Y @ Y.T)) / m


def choose_dim(eigvals, energy, floor=1):
    """Smallest d whose leading positive eigenvalues hold `energy` of the
    positive mass, raised to `floor` and capped at the number of values."""
    pos = np.clip(eigvals, 0.0, None)
    total = pos.sum()
    if total <= 0:
        raise DegenerateEmbeddingError("no positive eigenvalue")
    cum = np.cumsum(pos)
    d = int(np.searchsorted(cum, energy * total * (1.0 - 1e-12)) + 1)
    return min(max(d, floor), eigvals.size)


def learn_projection(Y, M, energy=0.98, labels=None, min_dim=1, ridge=None):
    """Solve the generalized eigenproblem and keep the top-d directions.

    Parameters
    ----------
    Y : ndarray, shape (m, p)
        In-sample points, one per column.
    M : ndarray, shape (p, p)
        Output of :func:`build_m`.
    energy : float in (0, 1]
        Fraction of the positive eigenvalue mass the embedding must keep.
    labels : ClusterAssignment or array, optional
        In-sample cluster labels stored with the model for extension.
    min_dim : int
        Lower bound on d, normally the number of clusters.
    ridge : float, optional
        Added to ``Y Y^T``; defaults to ``1e-8 * trace(Y Y^T) / m``.

    Returns
    -------
    ProjectionModel
        Columns of ``W`` satisfy ``W^T (Y Y^T + ridge I) W = I``.
    """
    Y = check_data_matrix(Y, "Y")
    M = np.asarray(M, dtype=np.float64)
    m, p = Y.shape
    if M.shape != (p, p):
        raise DimensionError(f"M has shape {M.shape}, expected {(p, p)}")
    if not 0.0 < energy <= 1.0:
        raise ParameterError(f"energy must lie in (0, 1], got {energy}")

    if ridge is None:
        ridge = ridge_for(Y)
    A = Y @ M @ Y.T
    A = (A + A.T) / 2.0
    B = Y @ Y.T
    B = (B + B.T) / 2.0 + ridge * np.eye(m)
    try:
        w, V = scipy.linalg.eigh(A, B)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"generalized eigensolver failed: {exc}") from exc
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    if w[0] <= 0:
        raise DegenerateEmbeddingError("all generalized eigenvalues are non-positive")

    d = choose_dim(w, energy, floor=min_dim)
    W = V[:, :d]
    pivot = np.argmax(np.abs(W), axis=0)
    W = W * np.where(W[pivot, np.arange(d)] < 0, -1.0, 1.0)

    if labels is None:
        lab = np.zeros(p, dtype=np.int64)
    else:
        lab = np.asarray(getattr(labels, "labels", labels), dtype=np.int64)
    model = ProjectionModel(W=W, eigvals=w[:d], embedded=np.empty((d, p)),
                            labels=lab, ridge=ridge)
    model.embedded = model.project(Y)
    return model
