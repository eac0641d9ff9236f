import numpy as np
import pytest

from issc.dataset import gen_union_of_subspaces
from issc.errors import DimensionError, FormatError, ParameterError
from issc.l1solver import L1Config
from issc.pipeline import (FORMAT_VERSION, MAGIC, Preprocessor, fit, load_model, model_from_bytes,
                           model_to_bytes, save_model)


@pytest.fixture(scope="module")
def data():
    return gen_union_of_subspaces(3, 30, 4, 30, 0.0, seed=7)


@pytest.fixture(scope="module")
def result(data):
    return fit(data.points, 3, L1Config(1e-6, 1e-3), seed=1)


def test_fit_outputs(result, data):
    proj = result.model.projection
    assert proj.embedded.shape == (proj.d, data.count)
    assert proj.d >= 3
    np.testing.assert_array_equal(result.model.labels, result.assignment.labels)
    assert set(result.timings) == {"preprocessing", "sparse_coding", "eigendecomposition",
                                   "kmeans", "projection"}
    assert all(t >= 0 for t in result.timings.values())
    assert result.model.params["lambda"] == 1e-6


def test_model_round_trip(result, data, tmp_path):
    path = tmp_path / "m.bin"
    save_model(result.model, path)
    loaded = load_model(path)
    assert path.read_bytes()[:8] == MAGIC
    assert model_to_bytes(loaded) == path.read_bytes()
    assert loaded.params == result.model.params
    a = result.model.predict(data.points)
    b = loaded.predict(data.points)
    np.testing.assert_array_equal(a.labels, b.labels)
    np.testing.assert_array_equal(a.distances, b.distances)


def test_round_trip_without_pca_or_normalization(data):
    res = fit(data.points, 3, L1Config(1e-6, 1e-3), pca_energy=None, normalize=False)
    blob = model_to_bytes(res.model)
    back = model_from_bytes(blob)
    assert back.preprocessor.pca is None and not back.preprocessor.normalize
    assert model_to_bytes(back) == blob


def test_fit_is_byte_deterministic(data, result):
    again = fit(data.points, 3, L1Config(1e-6, 1e-3), seed=1)
    assert model_to_bytes(again.model) == model_to_bytes(result.model)
    parallel = fit(data.points, 3, L1Config(1e-6, 1e-3), seed=1, n_jobs=3)
    assert model_to_bytes(parallel.model) == model_to_bytes(result.model)


def test_corrupt_model_files(result):
    blob = model_to_bytes(result.model)
    with pytest.raises(FormatError):
        model_from_bytes(blob[:20])
    with pytest.raises(FormatError):
        model_from_bytes(blob[:-8])
    with pytest.raises(FormatError):
        model_from_bytes(blob + b"\0" * 8)
    with pytest.raises(FormatError):
        model_from_bytes(b"NOTAMODL" + blob[8:])
    bumped = blob[:8] + (FORMAT_VERSION + 1).to_bytes(4, "little") + blob[12:]
    with pytest.raises(FormatError):
        model_from_bytes(bumped)


def test_preprocessor_rejects_wrong_width(data):
    prep = Preprocessor.fit(data.points)
    with pytest.raises(DimensionError):
        prep.transform(np.ones((5, 2)))


def test_bad_k(data):
    with pytest.raises(ParameterError):
        fit(data.points, 0, L1Config())
    with pytest.raises(ParameterError):
        fit(data.points, data.count + 1, L1Config())
