import numpy as np
import pytest

from issc.dataset import gen_union_of_subspaces
from issc.graph import build_affinity, graph_from_affinity
from issc.l1solver import L1Config
from issc.metrics import accuracy, nmi
from issc.spectral import KMeansConfig, cluster_in_sample, kmeans, spectral_embed


def two_cliques(a, b):
    A = np.zeros((a + b, a + b))
    A[:a, :a] = 1
    A[a:, a:] = 1
    np.fill_diagonal(A, 0)
    return graph_from_affinity(A)


def test_two_components():
    emb = spectral_embed(two_cliques(4, 5), 2)
    np.testing.assert_allclose(emb.eigenvalues, [0, 0], atol=1e-8)
    rows = emb.rows
    assert np.allclose(rows[:4], rows[0], atol=1e-8)
    assert np.allclose(rows[4:], rows[4], atol=1e-8)
    assert not np.allclose(rows[0], rows[4], atol=1e-3)


def test_full_basis_is_orthogonal():
    C = np.random.default_rng(0).uniform(size=(7, 7))
    np.fill_diagonal(C, 0)
    emb = spectral_embed(build_affinity(C), 7)
    np.testing.assert_allclose(emb.V.T @ emb.V, np.eye(7), atol=1e-8)
    np.testing.assert_allclose(emb.V @ emb.V.T, np.eye(7), atol=1e-8)


def test_two_by_two_bottom_vector():
    emb = spectral_embed(build_affinity(np.array([[0.0, 1.0], [0.0, 0.0]])), 1)
    assert emb.eigenvalues[0] == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(np.abs(emb.V[:, 0]), [2 ** -0.5, 2 ** -0.5], atol=1e-12)


def test_eigenpairs_are_exact(rng):
    C = rng.uniform(size=(30, 30)) * (rng.uniform(size=(30, 30)) < 0.2)
    np.fill_diagonal(C, 0)
    g = build_affinity(C)
    emb = spectral_embed(g, 5)
    np.testing.assert_allclose(emb.V.T @ emb.V, np.eye(5), atol=1e-8)
    np.testing.assert_allclose(g.L_norm @ emb.V, emb.V * emb.eigenvalues, atol=1e-7)
    assert np.all(np.diff(emb.eigenvalues) >= 0)
    assert emb.eigenvalues.min() >= -1e-9 and emb.eigenvalues.max() <= 2 + 1e-9


def test_k_out_of_range():
    with pytest.raises(ValueError):
        spectral_embed(two_cliques(2, 2), 5)


def test_kmeans_single_cluster(rng):
    X = rng.standard_normal((20, 3))
    res = kmeans(X, KMeansConfig(1, seed=0))
    assert not res.labels.any()
    np.testing.assert_allclose(res.centroids[0], X.mean(axis=0))
    assert res.inertia == pytest.approx(X.var(axis=0).sum() * 20)


def test_kmeans_separated_groups(rng):
    a = rng.normal(0.0, 0.1, (15, 2))
    b = rng.normal(50.0, 0.1, (10, 2))
    X = np.vstack([a, b])
    res = kmeans(X, KMeansConfig(2, seed=3))
    truth = np.repeat([0, 1], [15, 10])
    assert accuracy(res.labels, truth) == 1.0
    within = ((a - a.mean(0)) ** 2).sum() + ((b - b.mean(0)) ** 2).sum()
    assert res.inertia == pytest.approx(within)


def test_kmeans_one_point_per_cluster(rng):
    X = rng.standard_normal((4, 2))
    res = kmeans(X, KMeansConfig(4, seed=1))
    assert res.inertia == pytest.approx(0.0)
    assert sorted(res.labels) == [0, 1, 2, 3]


def test_kmeans_inertia_non_increasing_and_deterministic(rng):
    X = np.vstack([rng.normal(c, 1.0, (40, 3)) for c in (0, 4, 8)])
    res = kmeans(X, KMeansConfig(3, restarts=1, seed=5))
    assert np.all(np.diff(res.history) <= 1e-9)
    again = kmeans(X, KMeansConfig(3, restarts=1, seed=5))
    assert accuracy(res.labels, again.labels) == 1.0
    np.testing.assert_array_equal(res.labels, again.labels)


def test_kmeans_duplicate_points_empty_cluster():
    X = np.array([[0.0, 0.0]] * 5 + [[1.0, 1.0]])
    res = kmeans(X, KMeansConfig(3, seed=0))
    assert set(res.labels) <= {0, 1, 2}
    assert res.inertia >= 0


def test_cluster_in_sample_union_of_subspaces():
    ds = gen_union_of_subspaces(3, 30, 4, 50, 0.0, seed=1)
    asg, codes, graph, emb = cluster_in_sample(ds.points, L1Config(1e-6, 1e-3),
                                               KMeansConfig(3, seed=0))
    assert accuracy(asg.labels, ds.labels) >= 0.95
    assert emb.V.shape == (150, 3)


def test_cluster_in_sample_single_cluster():
    ds = gen_union_of_subspaces(1, 10, 3, 20, 0.0, seed=2)
    asg, *_ = cluster_in_sample(ds.points, L1Config(1e-6, 1e-3), KMeansConfig(1))
    assert not asg.labels.any()


def test_cluster_in_sample_duplicated_clouds():
    # one base cloud copied into two random 3-dim subspaces of R^20
    r = np.random.default_rng(3)
    coords = r.standard_normal((3, 40))
    bases = [np.linalg.qr(r.standard_normal((20, 3)))[0] for _ in range(2)]
    Y = np.hstack([b @ coords for b in bases])
    Y /= np.linalg.norm(Y, axis=0)
    truth = np.repeat([0, 1], 40)
    asg, *_ = cluster_in_sample(Y, L1Config(1e-6, 1e-3), KMeansConfig(2, seed=0))
    assert nmi(asg.labels, truth) >= 0.9
