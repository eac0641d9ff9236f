"""Normalized spectral clustering on the l1-graph."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionError, NumericalError, ParameterError
from .graph import build_affinity, build_codes
from .l1solver import L1Config


@dataclass
class SpectralEmbedding:
    """Eigenvectors of the k smallest Laplacian eigenvalues.

    ``V`` holds the orthonormal eigenvectors; ``rows`` is ``V`` with each
    row scaled to unit length, the input to k-means.
    """

    V: np.ndarray
    eigenvalues: np.ndarray
    rows: np.ndarray


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iters: int = 100
    restarts: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        if self.max_iters < 1 or self.restarts < 1:
            raise ParameterError("max_iters and restarts must be >= 1")


@dataclass
class ClusterAssignment:
    labels: np.ndarray
    inertia: float
    centroids: np.ndarray | None = None
    history: list = field(default_factory=list)


def spectral_embed(graph, k):
    """Bottom-k eigenpairs of ``graph.L_norm`` by dense symmetric eigendecomposition."""
    L = graph.L_norm
    p = L.shape[0]
    if not 1 <= k <= p:
        raise ParameterError(f"k must be in [1, {p}], got {k}")
    try:
        w, V = scipy.linalg.eigh(L, subset_by_index=(0, k - 1))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    # fix each eigenvector's sign so results do not depend on LAPACK internals
    pivot = np.argmax(np.abs(V), axis=0)
    V = V * np.where(V[pivot, np.arange(k)] < 0, -1.0, 1.0)
    norms = np.linalg.norm(V, axis=1)
    rows = V / np.where(norms > 0, norms, 1.0)[:, None]
    return SpectralEmbedding(V=V, eigenvalues=w, rows=rows)


def _sq_dists(X, centers):
    return ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def _kmeanspp(X, k, rng):
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[j] = X[idx]
        d2 = np.minimum(d2, ((X - centers[j]) ** 2).sum(axis=1))
    return centers


def _lloyd(X, centers, max_iters):
    history = []
    labels = None
    for _ in range(max_iters):
        d2 = _sq_dists(X, centers)
        new_labels = np.argmin(d2, axis=1)
        history.append(float(d2[np.arange(X.shape[0]), new_labels].sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(centers.shape[0]):
            members = labels == j
            if members.any():
                centers[j] = X[members].mean(axis=0)
            else:
                # empty cluster: move it onto the point farthest from its centroid
                far = int(np.argmax(d2[np.arange(X.shape[0]), labels]))
                centers[j] = X[far]
                labels = labels.copy()
                labels[far] = j
                d2[far] = 0.0
    d2 = _sq_dists(X, centers)
    labels = np.argmin(d2, axis=1)
    inertia = float(d2[np.arange(X.shape[0]), labels].sum())
    history.append(inertia)
    return labels, centers, inertia, history


def kmeans(points, config):
    """Lloyd's algorithm with k-means++ seeding, best of ``config.restarts`` runs.

    Parameters
    ----------
    points : ndarray, shape (n, dim)
        One point per row.
    config : KMeansConfig
    """
    X = np.asarray(points, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionError("kmeans expects a 2-D array with one point per row")
    if X.shape[0] < config.k:
        raise ParameterError(f"need at least k={config.k} points, got {X.shape[0]}")
    rng = np.random.default_rng(config.seed)
    best = None
    for _ in range(config.restarts):
        centers = _kmeanspp(X, config.k, rng)
        labels, centers, inertia, history = _lloyd(X, centers, config.max_iters)
        if best is None or inertia < best.inertia:
            best = ClusterAssignment(labels.astype(np.int64), inertia, centers, history)
    return best


def cluster_in_sample(Y, l1=L1Config(), km=None, n_jobs=1):
    """Codes, graph, spectral embedding and k-means labels for the in-sample data.

    Returns
    -------
    assignment : ClusterAssignment
    codes : SparseCodeMatrix
    graph : AffinityGraph
    embedding : SpectralEmbedding
    """
    if km is None:
        raise ParameterError("a KMeansConfig with the cluster count is required")
    codes = build_codes(Y, l1, n_jobs=n_jobs)
    graph = build_affinity(codes)
    embedding = spectral_embed(graph, km.k)
    assignment = kmeans(embedding.rows, km)
    return assignment, codes, graph, embedding
