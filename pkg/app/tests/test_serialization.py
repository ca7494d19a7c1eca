"""
Tests for fitted-model persistence and the model cache
"""

import numpy as np
import pytest

from app.core.errors import DatasetParseError
from app.models.predictors import LassoLogitModel, NmfModel
from app.services.linkpred import fit_lasso_logit, fit_temporal_nmf
from app.services.serialization import cached_fit, load_model, save_model


class TestModelArchives:
    """Saving and loading .npz model archives"""

    def test_lasso_archive(self, tmp_path, synthetic_network):
        model = fit_lasso_logit(synthetic_network, 5, alpha_grid=[0.05, 0.5])
        path = save_model(model, tmp_path / "lasso")
        assert path.suffix == ".npz"

        loaded = load_model(path)
        assert isinstance(loaded, LassoLogitModel)
        assert loaded.pair_index == model.pair_index
        assert loaded.alpha == model.alpha
        assert loaded.validation_auc == model.validation_auc
        np.testing.assert_array_equal(loaded.coef, model.coef)
        np.testing.assert_array_equal(loaded.intercepts, model.intercepts)

    def test_nmf_archive(self, tmp_path, synthetic_network):
        model = fit_temporal_nmf(synthetic_network, 4, q=2, restarts=2, max_iter=15)
        loaded = load_model(save_model(model, tmp_path / "nmf.npz"))
        assert isinstance(loaded, NmfModel)
        assert loaded.restart == model.restart
        assert loaded.loss_history == model.loss_history
        np.testing.assert_array_equal(loaded.V_star, model.V_star)
        assert loaded.U.shape == model.U.shape

    def test_corrupt_archive(self, tmp_path):
        path = tmp_path / "broken.npz"
        path.write_bytes(b"not an archive")
        with pytest.raises(DatasetParseError):
            load_model(path)

    def test_unknown_object(self, tmp_path):
        with pytest.raises(TypeError):
            save_model("model", tmp_path / "x.npz")


class TestCachedFit:
    """Fitting once per cache key"""

    def test_second_call_reads_cache(self, tmp_path, synthetic_network):
        calls = []

        def fit():
            calls.append(1)
            return fit_temporal_nmf(synthetic_network, 3, q=2, restarts=1, max_iter=10)

        first = cached_fit(tmp_path, "key", fit)
        second = cached_fit(tmp_path, "key", fit)
        assert len(calls) == 1
        np.testing.assert_array_equal(first.U_star, second.U_star)

    def test_disabled_cache_always_fits(self, synthetic_network):
        calls = []

        def fit():
            calls.append(1)
            return fit_temporal_nmf(synthetic_network, 3, q=2, restarts=1, max_iter=5)

        cached_fit(None, "key", fit)
        cached_fit(None, "key", fit)
        assert len(calls) == 2
