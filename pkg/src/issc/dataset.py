"""Data ingestion, PCA preprocessing, splitting and synthetic generators.

Points are stored column-major throughout the package: a data matrix has
shape ``(m, q)`` with one m-dimensional point per column.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, EmptyDataError, FormatError, ParameterError


def check_data_matrix(data, name="data"):
    """Return `data` as a finite float64 ``(m, q)`` array or raise."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D (features x points), got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must have at least one feature and one point, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} contains NaN or Inf")
    return arr


@dataclass(frozen=True)
class LabeledDataset:
    """Column-major points with contiguous integer labels in ``[0, k)``."""

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        pts = check_data_matrix(self.points, "points")
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.shape[0] != pts.shape[1]:
            raise DimensionError(
                f"labels length {labels.shape} does not match point count {pts.shape[1]}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)

    @property
    def feature_dim(self) -> int:
        return self.points.shape[0]

    @property
    def count(self) -> int:
        return self.points.shape[1]

    @property
    def k(self) -> int:
        return int(np.unique(self.labels).size)

    def subset(self, idx) -> "LabeledDataset":
        return LabeledDataset(self.points[:, idx], self.labels[idx])


@dataclass(frozen=True)
class SplitSpec:
    in_sample_count: int
    seed: int = 0


def remap_labels(labels):
    """Map arbitrary integer labels onto ``0..k-1`` in sorted order."""
    _, inv = np.unique(np.asarray(labels), return_inverse=True)
    return inv.astype(np.int64)


def _parse_float(token, lineno):
    try:
        return float(token)
    except ValueError:
        raise FormatError(f"line {lineno}: cannot parse {token!r} as a number") from None


def load_matrix(path, format="labeled-csv"):
    """Read a CSV file with one point per row.

    Parameters
    ----------
    path : str or Path
    format : {"csv", "labeled-csv"}
        With ``labeled-csv`` the last column holds an integer class label.
        A non-numeric first row is treated as a header and skipped.

    Returns
    -------
    LabeledDataset
        Points transposed to column-major order. For plain ``csv`` every
        label is 0.

    Raises
    ------
    EmptyDataError
        The file holds no data rows (a subclass of FormatError).
    """
    if format not in ("csv", "labeled-csv"):
        raise ParameterError(f"unknown format {format!r}")
    with open(path, newline="") as fh:
        rows = [(i + 1, row) for i, row in enumerate(csv.reader(fh))
                if row and any(cell.strip() for cell in row)]
    if rows:
        first = rows[0][1]
        try:
            [float(c) for c in first]
        except ValueError:
            rows = rows[1:]
    if not rows:
        raise EmptyDataError(f"{path}: no data rows")

    width = len(rows[0][1])
    values, labels = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise DimensionError(f"line {lineno}: expected {width} columns, got {len(row)}")
        nums = [_parse_float(c.strip(), lineno) for c in row]
        if format == "labeled-csv":
            if width < 2:
                raise FormatError(f"line {lineno}: labeled-csv needs a feature and a label column")
            lab = nums.pop()
            if lab != int(lab):
                raise FormatError(f"line {lineno}: label {lab!r} is not an integer")
            labels.append(int(lab))
        values.append(nums)

    points = np.array(values, dtype=np.float64).T
    if not np.all(np.isfinite(points)):
        bad = int(np.argwhere(~np.isfinite(points))[0][1])
        raise DimensionError(f"line {rows[bad][0]}: non-finite value")
    if format == "csv":
        labels = np.zeros(points.shape[1], dtype=np.int64)
    return LabeledDataset(points, remap_labels(labels))


def save_matrix(path, points, labels=None):
    """Write column-major `points` as CSV rows, optionally with a label column."""
    points = np.asarray(points, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for j in range(points.shape[1]):
            row = [repr(float(v)) for v in points[:, j]]
            if labels is not None:
                row.append(str(int(labels[j])))
            w.writerow(row)


@dataclass(frozen=True)
class PCABasis:
    """Mean and orthonormal basis learned by :func:`pca_reduce`."""

    mean: np.ndarray
    basis: np.ndarray
    eigenvalues: np.ndarray

    def transform(self, data):
        data = check_data_matrix(data)
        if data.shape[0] != self.mean.shape[0]:
            raise DimensionError(
                f"expected {self.mean.shape[0]} features, got {data.shape[0]}")
        return column_matmul(self.basis.T, data - self.mean[:, None])


def column_matmul(a, b, chunk=512):
    """``a @ b`` computed so that each output column depends only on the
    matching column of `b`.

    BLAS results (and numpy reductions) can differ in the last bit with
    batch shape. Accumulating rank-one terms in a fixed order does not,
    which keeps projections bitwise reproducible whether points arrive one
    at a time or in bulk.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    out = np.empty((a.shape[0], b.shape[1]))
    for s in range(0, b.shape[1], chunk):
        blk = b[:, s:s + chunk]
        out[:, s:s + chunk] = sum_rows(a.T[:, :, None] * blk[:, None, :])
    return out


def sum_rows(x):
    """Sum over axis 0, adding rows strictly in order so the result for any
    trailing index does not depend on the other trailing entries."""
    x = np.asarray(x, dtype=np.float64)
    acc = np.zeros(x.shape[1:])
    for row in x:
        acc += row
    return acc


def pca_reduce(data, energy=0.98):
    """Project centered data onto the leading principal directions.

    Keeps the smallest number r of directions whose covariance eigenvalues
    sum to at least ``energy`` of the total.

    Returns
    -------
    reduced : ndarray, shape (r, q)
    pca : PCABasis
        ``pca.basis`` has shape (m, r) with orthonormal columns; apply
        ``pca.transform`` to out-of-sample data.
    """
    data = check_data_matrix(data)
    if not 0.0 < energy <= 1.0:
        raise ParameterError(f"energy must lie in (0, 1], got {energy}")
    if data.shape[1] < 2:
        raise DimensionError("pca_reduce needs at least 2 points")
    mean = data.mean(axis=1)
    centered = data - mean[:, None]
    u, s, _ = np.linalg.svd(centered, full_matrices=False)
    eig = s ** 2 / (data.shape[1] - 1)
    total = eig.sum()
    if total == 0.0:
        r = 1
    else:
        cum = np.cumsum(eig)
        # relative slack so energy=1.0 is not defeated by rounding in cumsum
        r = int(np.searchsorted(cum, energy * total * (1.0 - 1e-12)) + 1)
        r = min(r, eig.size)
    # deterministic sign: largest-magnitude entry of each direction is positive
    basis = u[:, :r].copy()
    flip = np.sign(basis[np.argmax(np.abs(basis), axis=0), np.arange(r)])
    basis *= np.where(flip == 0, 1.0, flip)
    pca = PCABasis(mean=mean, basis=basis, eigenvalues=eig[:r])
    return pca.transform(data), pca


def normalize_columns(data):
    """Scale each column to unit l2 norm; zero columns stay zero."""
    data = np.asarray(data, dtype=np.float64)
    norms = np.sqrt(sum_rows(data * data))
    return data / np.where(norms > 0, norms, 1.0)


def split(dataset, spec):
    """Random disjoint in-/out-of-sample partition, reproducible from ``spec.seed``."""
    n = dataset.count
    if spec.in_sample_count < 1 or spec.in_sample_count >= n:
        raise ParameterError(
            f"in_sample_count must be in [1, {n - 1}], got {spec.in_sample_count}")
    perm = np.random.default_rng(spec.seed).permutation(n)
    return dataset.subset(perm[:spec.in_sample_count]), dataset.subset(perm[spec.in_sample_count:])


def gen_union_of_subspaces(k, dim_ambient, dim_sub, per_cluster, noise_sigma=0.0, seed=0):
    """Sample `per_cluster` points from each of `k` random `dim_sub`-dimensional
    linear subspaces of R^`dim_ambient`.

    Each subspace has an independent random orthonormal basis. Columns are
    unit-normalized after the Gaussian noise is added.
    """
    if dim_sub >= dim_ambient:
        raise ParameterError(f"dim_sub ({dim_sub}) must be smaller than dim_ambient ({dim_ambient})")
    if k < 1 or dim_sub < 1:
        raise ParameterError("k and dim_sub must be positive")
    if per_cluster < dim_sub + 1:
        raise ParameterError(f"per_cluster must be at least dim_sub + 1 = {dim_sub + 1}")
    if noise_sigma < 0:
        raise ParameterError("noise_sigma must be non-negative")
    rng = np.random.default_rng(seed)
    blocks = []
    for _ in range(k):
        basis, _ = np.linalg.qr(rng.standard_normal((dim_ambient, dim_sub)))
        blocks.append(basis @ rng.standard_normal((dim_sub, per_cluster)))
    points = np.hstack(blocks)
    if noise_sigma > 0:
        points = points + noise_sigma * rng.standard_normal(points.shape)
    labels = np.repeat(np.arange(k), per_cluster)
    return LabeledDataset(normalize_columns(points), labels)


def trefoil(t):
    """Trefoil knot curve, shape (3, len(t))."""
    t = np.asarray(t, dtype=np.float64)
    return np.vstack([np.sin(t) + 2.0 * np.sin(2.0 * t),
                      np.cos(t) - 2.0 * np.cos(2.0 * t),
                      -np.sin(3.0 * t)])


TREFOIL_RADIUS = 3.0


def gen_trefoil_knots(per_knot, separation=3.0 * TREFOIL_RADIUS, noise_sigma=0.0,
                      seed=0, lift=None, return_params=False):
    """Two trefoil knots in R^3 whose centers lie `separation` apart along x.

    Both knots are raised by `lift` along z (default ``separation / 2``).
    Sparse coding only sees directions from the origin once columns are
    unit-normalized, so a knot centered on the origin would smear over the
    whole sphere and two knots placed symmetrically about it would map
    onto antipodal, hence indistinguishable, lines.

    With ``return_params=True`` also returns the curve parameter of every
    point, so callers can check points against :func:`trefoil`.
    """
    if per_knot < 10:
        raise ParameterError("per_knot must be at least 10")
    if noise_sigma < 0 or separation < 0:
        raise ParameterError("noise_sigma and separation must be non-negative")
    if lift is None:
        lift = separation / 2.0
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 2.0 * np.pi, size=2 * per_knot)
    points = trefoil(t)
    points[0, :per_knot] -= separation / 2.0
    points[0, per_knot:] += separation / 2.0
    points[2, :] += lift
    if noise_sigma > 0:
        points = points + noise_sigma * rng.standard_normal(points.shape)
    ds = LabeledDataset(points, np.repeat([0, 1], per_knot))
    return (ds, t) if return_params else ds
