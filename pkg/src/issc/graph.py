"""Sparse self-representation codes and the l1-graph built from them."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import check_data_matrix
from .errors import DimensionError
from .l1solver import L1Config, solve_l1


@dataclass
class SparseCodeMatrix:
    """Column i of ``C`` codes point i over all other points; ``diag(C) = 0``."""

    C: np.ndarray
    converged: np.ndarray
    residual_norms: np.ndarray


@dataclass
class AffinityGraph:
    A: np.ndarray
    degrees: np.ndarray
    L_norm: np.ndarray


def _code_column(Y, i, config):
    D = Y.copy()
    D[:, i] = 0.0
    return solve_l1(Y[:, i], D, config)


def build_codes(Y, config=L1Config(), n_jobs=1):
    """Solve the l1 problem for every column of `Y` against the others.

    The dictionary for column i is `Y` with column i zeroed, so indices of
    ``C`` line up with the points. Columns are independent and may be
    spread over `n_jobs` threads; the result does not depend on the
    order in which they finish.
    """
    Y = check_data_matrix(Y, "Y")
    p = Y.shape[1]
    if p < 2:
        raise DimensionError("build_codes needs at least 2 points")

    if n_jobs == 1:
        codes = [_code_column(Y, i, config) for i in range(p)]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            codes = list(pool.map(lambda i: _code_column(Y, i, config), range(p)))

    C = np.zeros((p, p))
    for i, code in enumerate(codes):
        C[:, i] = code.coefficients
    C[np.diag_indices(p)] = 0.0
    return SparseCodeMatrix(
        C=C,
        converged=np.array([code.converged for code in codes]),
        residual_norms=np.array([code.residual_norm for code in codes]),
    )


def normalized_affinity(A):
    """``S^{-1/2} A S^{-1/2}`` with rows/columns of isolated vertices set to zero."""
    s = A.sum(axis=1)
    inv_sqrt = np.zeros_like(s)
    nz = s > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(s[nz])
    N = inv_sqrt[:, None] * A * inv_sqrt[None, :]
    return (N + N.T) / 2.0


def graph_from_affinity(A):
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"affinity must be square, got {A.shape}")
    L = np.eye(A.shape[0]) - normalized_affinity(A)
    return AffinityGraph(A=A, degrees=A.sum(axis=1), L_norm=L)


def build_affinity(codes):
    """``A = |C| + |C|^T`` and the normalized Laplacian ``I - S^{-1/2} A S^{-1/2}``.

    An isolated vertex (zero degree) gets a zero row in the normalized
    affinity, so its Laplacian row is the unit vector and it forms its own
    component.
    """
    C = codes.C if isinstance(codes, SparseCodeMatrix) else np.asarray(codes, dtype=np.float64)
    absC = np.abs(C)
    A = absC + absC.T
    A[np.diag_indices_from(A)] = 0.0
    return graph_from_affinity(A)
