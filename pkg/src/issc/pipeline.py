"""Fit an inductive model on in-sample data and apply it to new points.

The model file is a little-endian binary blob::

    magic      8 bytes   b"ISSCMODL"
    version    uint32
    input_dim  uint32    features before preprocessing
    dim        uint32    features after preprocessing (rows of W)
    d          uint32    embedding dimension
    p          uint32    in-sample point count
    k          uint32    cluster count
    flags      uint32    bit 0: PCA present, bit 1: unit-normalize columns
    ridge      float64
    [mean      float64[input_dim]]          if PCA
    [basis     float64[input_dim, dim]]     if PCA, row-major
    W          float64[dim, d]              row-major
    eigvals    float64[d]
    embedded   float64[d, p]                row-major
    labels     int64[p]

A JSON sidecar (``<model>.json``) carries the fit parameters.
"""
from __future__ import annotations

import json
import struct
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import PCABasis, check_data_matrix, normalize_columns, pca_reduce
from .errors import DimensionError, FormatError, ParameterError
from .extend import extend
from .graph import build_affinity, build_codes
from .l1solver import L1Config
from .npe import ProjectionModel, build_m, learn_projection
from .spectral import KMeansConfig, kmeans, spectral_embed

MAGIC = b"ISSCMODL"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sIIIIIIId")


@dataclass
class Preprocessor:
    """Optional PCA followed by optional unit-normalization of columns.

    Fitted on in-sample data only and reused unchanged for new points.
    """

    input_dim: int
    pca: PCABasis | None = None
    normalize: bool = True

    @classmethod
    def fit(cls, Y, pca_energy=0.98, normalize=True):
        Y = check_data_matrix(Y, "Y")
        pca = None
        if pca_energy is not None:
            _, pca = pca_reduce(Y, pca_energy)
        return cls(input_dim=Y.shape[0], pca=pca, normalize=normalize)

    @property
    def output_dim(self):
        return self.pca.basis.shape[1] if self.pca is not None else self.input_dim

    def transform(self, X):
        X = check_data_matrix(X, "X")
        if X.shape[0] != self.input_dim:
            raise DimensionError(f"expected {self.input_dim} features, got {X.shape[0]}")
        if self.pca is not None:
            X = self.pca.transform(X)
        if self.normalize:
            X = normalize_columns(X)
        return X


@dataclass
class ISSCModel:
    preprocessor: Preprocessor
    projection: ProjectionModel
    k: int
    params: dict = field(default_factory=dict)

    @property
    def labels(self):
        return self.projection.labels

    def predict(self, X):
        """Cluster raw out-of-sample points (columns of `X`)."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 2 and X.shape[1] == 0:
            return extend(self.projection, np.empty((self.projection.feature_dim, 0)))
        return extend(self.projection, self.preprocessor.transform(X))


@dataclass
class FitResult:
    model: ISSCModel
    assignment: object
    codes: object
    graph: object
    embedding: object
    timings: dict


def fit(Y, k, l1=L1Config(), pca_energy=0.98, embed_energy=0.98, normalize=True,
        kmeans_iters=100, kmeans_restarts=10, seed=0, n_jobs=1):
    """Cluster in-sample points and learn the projection used for extension.

    Parameters
    ----------
    Y : ndarray, shape (m, p)
        Raw in-sample points, one per column.
    k : int
        Number of clusters.
    l1 : L1Config
    pca_energy : float or None
        Variance fraction kept by PCA; ``None`` skips PCA.
    embed_energy : float
        Positive-eigenvalue mass kept by the projection.
    normalize : bool
        Scale preprocessed columns to unit length before coding.

    Returns
    -------
    FitResult
        ``timings`` has wall-clock seconds per stage.
    """
    Y = check_data_matrix(Y, "Y")
    if not 1 <= k <= Y.shape[1]:
        raise ParameterError(f"k must be in [1, {Y.shape[1]}], got {k}")
    timings = {}

    t0 = time.perf_counter()
    prep = Preprocessor.fit(Y, pca_energy, normalize)
    Yp = prep.transform(Y)
    timings["preprocessing"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    codes = build_codes(Yp, l1, n_jobs=n_jobs)
    timings["sparse_coding"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    graph = build_affinity(codes)
    embedding = spectral_embed(graph, k)
    timings["eigendecomposition"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    assignment = kmeans(embedding.rows, KMeansConfig(k, kmeans_iters, kmeans_restarts, seed))
    timings["kmeans"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    projection = learn_projection(Yp, build_m(codes), embed_energy, assignment, min_dim=k)
    timings["projection"] = time.perf_counter() - t0

    params = {
        "k": k, "lambda": l1.lam, "delta": l1.delta, "max_iters": l1.max_iters,
        "pca_energy": pca_energy, "embed_energy": embed_energy, "normalize": normalize,
        "kmeans_iters": kmeans_iters, "kmeans_restarts": kmeans_restarts, "seed": seed,
    }
    model = ISSCModel(prep, projection, k, params)
    return FitResult(model, assignment, codes, graph, embedding, timings)


def _f64(a):
    return np.ascontiguousarray(a, dtype="<f8").tobytes()


def model_to_bytes(model):
    prep, proj = model.preprocessor, model.projection
    flags = (1 if prep.pca is not None else 0) | (2 if prep.normalize else 0)
    parts = [_HEADER.pack(MAGIC, FORMAT_VERSION, prep.input_dim, proj.feature_dim, proj.d,
                          proj.embedded.shape[1], model.k, flags, proj.ridge)]
    if prep.pca is not None:
        parts += [_f64(prep.pca.mean), _f64(prep.pca.basis)]
    parts += [_f64(proj.W), _f64(proj.eigvals), _f64(proj.embedded),
              np.ascontiguousarray(proj.labels, dtype="<i8").tobytes()]
    return b"".join(parts)


def model_from_bytes(blob, params=None):
    if len(blob) < _HEADER.size:
        raise FormatError("model file truncated")
    magic, version, input_dim, dim, d, p, k, flags, ridge = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise FormatError("not an iSSC model file")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported model version {version}")
    off = _HEADER.size

    def take(shape, dtype="<f8"):
        nonlocal off
        n = int(np.prod(shape))
        end = off + 8 * n
        if end > len(blob):
            raise FormatError("model file truncated")
        arr = np.frombuffer(blob, dtype=dtype, count=n, offset=off).reshape(shape)
        off = end
        return arr.astype(np.float64 if dtype == "<f8" else np.int64)

    pca = None
    if flags & 1:
        mean = take((input_dim,))
        basis = take((input_dim, dim))
        pca = PCABasis(mean=mean, basis=basis, eigenvalues=np.empty(0))
    W = take((dim, d))
    eigvals = take((d,))
    embedded = take((d, p))
    labels = take((p,), "<i8")
    if off != len(blob):
        raise FormatError("trailing bytes in model file")
    prep = Preprocessor(input_dim=input_dim, pca=pca, normalize=bool(flags & 2))
    proj = ProjectionModel(W=W, eigvals=eigvals, embedded=embedded, labels=labels, ridge=ridge)
    return ISSCModel(prep, proj, k, params or {})


def save_model(model, path):
    """Write the binary model and its JSON sidecar."""
    path = Path(path)
    path.write_bytes(model_to_bytes(model))
    meta = {"format": "issc-model", "format_version": FORMAT_VERSION,
            "input_dim": model.preprocessor.input_dim, "d": model.projection.d,
            "in_sample_count": int(model.projection.embedded.shape[1]),
            "params": model.params}
    Path(str(path) + ".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def load_model(path):
    path = Path(path)
    params = {}
    sidecar = Path(str(path) + ".json")
    if sidecar.exists():
        params = json.loads(sidecar.read_text()).get("params", {})
    return model_from_bytes(path.read_bytes(), params)
