import numpy as np
import pytest
import scipy.linalg

from issc.dataset import gen_union_of_subspaces, normalize_columns
from issc.errors import DegenerateEmbeddingError, DimensionError
from issc.graph import build_codes
from issc.l1solver import L1Config
from issc.npe import build_m, choose_dim, learn_projection
from issc.spectral import KMeansConfig, cluster_in_sample


def test_build_m_examples(rng):
    assert not build_m(np.zeros((3, 3))).any()
    np.testing.assert_allclose(build_m(np.array([[0.0, 1.0], [1.0, 0.0]])), [[-1, 2], [2, -1]])
    C = rng.standard_normal((6, 6))
    M = build_m(C)
    assert np.array_equal(M, M.T)
    np.testing.assert_allclose(M, C + C.T - C.T @ C, atol=1e-12)


def test_full_energy_keeps_all_positive(rng):
    Y = rng.standard_normal((5, 12))
    C = rng.standard_normal((12, 12)) * 0.2
    np.fill_diagonal(C, 0)
    model = learn_projection(Y, build_m(C), energy=1.0)
    A = Y @ build_m(C) @ Y.T
    B = Y @ Y.T + model.ridge * np.eye(5)
    w = scipy.linalg.eigh(A, B, eigvals_only=True)
    assert model.d == int(np.sum(w > 0))


def test_identity_data_reduces_to_ordinary_eigenproblem(rng):
    p = 6
    C = rng.standard_normal((p, p)) * 0.3
    np.fill_diagonal(C, 0)
    M = build_m(C)
    model = learn_projection(np.eye(p), M, energy=1.0, min_dim=p, ridge=0.0)
    w, V = np.linalg.eigh(M)
    np.testing.assert_allclose(model.eigvals, w[::-1], atol=1e-10)
    # same directions up to sign
    overlap = np.abs(model.W.T @ V[:, ::-1])
    np.testing.assert_allclose(np.diag(overlap), 1.0, atol=1e-8)


def test_constraint_and_eigen_residual(rng):
    ds = gen_union_of_subspaces(2, 15, 3, 20, 0.01, seed=4)
    Y = ds.points
    codes = build_codes(Y, L1Config(1e-6, 0.05))
    M = build_m(codes)
    model = learn_projection(Y, M, 0.98, min_dim=2)
    B = Y @ Y.T + model.ridge * np.eye(Y.shape[0])
    A = Y @ M @ Y.T
    assert np.linalg.norm(model.W.T @ B @ model.W - np.eye(model.d)) <= 1e-8 * model.d
    for i in range(model.d):
        w = model.W[:, i]
        resid = np.linalg.norm(A @ w - model.eigvals[i] * (B @ w))
        assert resid <= 1e-6 * np.linalg.norm(A)
    assert np.all(np.diff(model.eigvals) <= 0)
    full = scipy.linalg.eigh((A + A.T) / 2, B, eigvals_only=True)[::-1]
    np.testing.assert_allclose(model.eigvals, full[:model.d], rtol=1e-8, atol=1e-10)


def test_embedding_is_compact():
    ds = gen_union_of_subspaces(3, 30, 4, 40, 0.0, seed=5)
    Y = ds.points
    asg, codes, *_ = cluster_in_sample(Y, L1Config(1e-6, 1e-3), KMeansConfig(3))
    model = learn_projection(Y, build_m(codes), 0.98, asg, min_dim=3)
    Z = model.embedded
    d = np.linalg.norm(Z[:, :, None] - Z[:, None, :], axis=0)
    same = ds.labels[:, None] == ds.labels[None, :]
    off = ~np.eye(len(ds.labels), dtype=bool)
    assert d[same & off].mean() < d[~same].mean()


def test_choose_dim():
    assert choose_dim(np.array([5.0, 3.0, 2.0, -1.0]), 0.5) == 1
    assert choose_dim(np.array([5.0, 3.0, 2.0, -1.0]), 1.0) == 3
    assert choose_dim(np.array([5.0, 3.0, 2.0, -1.0]), 0.5, floor=4) == 4
    with pytest.raises(DegenerateEmbeddingError):
        choose_dim(np.array([-1.0, -2.0]), 0.9)


def test_degenerate_and_shape_errors(rng):
    Y = rng.standard_normal((3, 4))
    with pytest.raises(DegenerateEmbeddingError):
        learn_projection(Y, -np.eye(4))
    with pytest.raises(DimensionError):
        learn_projection(Y, np.eye(5))
