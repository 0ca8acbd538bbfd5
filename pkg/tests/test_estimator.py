"""Estimator facade tests: scikit-learn contract and paired-start behavior."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.model_selection import GridSearchCV

from lmqn.estimator import QuasiNewtonMLPRegressor


def make_regression_data(n=80, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n, 2))
    y = np.sin(2.0 * X[:, 0]) + X[:, 1] ** 2
    return X, y


def small_estimator(**overrides):
    params = dict(hidden_units=8, max_iter=60, tol=1e-8, random_state=0)
    params.update(overrides)
    return QuasiNewtonMLPRegressor(**params)


class TestSklearnContract:
    def test_constructor_stores_params_verbatim(self):
        est = QuasiNewtonMLPRegressor(hidden_units=7, solver="lbfgs", memory=3)
        assert est.hidden_units == 7
        assert est.solver == "lbfgs"
        assert est.memory == 3

    def test_get_params_roundtrips_through_set_params(self):
        est = small_estimator(solver="lnaq")
        params = est.get_params()
        other = QuasiNewtonMLPRegressor().set_params(**params)
        assert other.get_params() == params

    def test_clone_produces_unfitted_copy(self):
        X, y = make_regression_data()
        est = small_estimator().fit(X, y)
        fresh = clone(est)
        assert fresh.get_params() == est.get_params()
        with pytest.raises(NotFittedError):
            fresh.predict(X)

    def test_predict_before_fit_raises(self):
        X, _ = make_regression_data()
        with pytest.raises(NotFittedError):
            QuasiNewtonMLPRegressor().predict(X)

    def test_invalid_solver_rejected_at_fit_not_init(self):
        est = QuasiNewtonMLPRegressor(solver="adam")
        X, y = make_regression_data()
        with pytest.raises(ValueError, match="unknown optimizer"):
            est.fit(X, y)

    def test_predict_rejects_wrong_feature_count(self):
        X, y = make_regression_data()
        est = small_estimator().fit(X, y)
        with pytest.raises(ValueError, match="features"):
            est.predict(X[:, :1])


class TestFitPredict:
    def test_shapes_and_fitted_attributes(self):
        X, y = make_regression_data()
        est = small_estimator().fit(X, y)
        pred = est.predict(X)
        assert pred.shape == (len(X),)
        assert est.n_features_in_ == 2
        assert est.params_.shape == est.initial_params_.shape
        assert est.n_iter_ <= 60
        assert est.record_.optimizer == "lmoq"
        assert est.loss_ == est.record_.final_loss

    def test_training_reduces_loss(self):
        X, y = make_regression_data()
        est = small_estimator().fit(X, y)
        assert est.loss_ < est.record_.rows[0].loss

    def test_fit_quality_on_smooth_target(self):
        X, y = make_regression_data(n=120, seed=3)
        est = small_estimator(max_iter=200).fit(X, y)
        assert est.score(X, y) > 0.9

    @pytest.mark.parametrize("solver", ["lbfgs", "lnaq", "lmoq"])
    def test_every_solver_trains(self, solver):
        X, y = make_regression_data()
        est = small_estimator(solver=solver).fit(X, y)
        assert est.record_.optimizer == solver
        assert np.isfinite(est.loss_)

    def test_literal_theta_mode_runs(self):
        X, y = make_regression_data()
        est = small_estimator(solver="lnaq", literal_theta=True, max_iter=20).fit(X, y)
        # The uncorrected recurrence collapses the momentum weights to zero.
        assert all(mu == 0.0 for mu in est.record_.mus)


class TestDeterminism:
    def test_same_random_state_same_model(self):
        X, y = make_regression_data()
        a = small_estimator().fit(X, y)
        b = small_estimator().fit(X, y)
        np.testing.assert_array_equal(a.params_, b.params_)
        np.testing.assert_array_equal(a.predict(X), b.predict(X))

    def test_solvers_share_initial_weights_for_same_seed(self):
        # Paired comparisons require identical starting points.
        X, y = make_regression_data()
        fits = [small_estimator(solver=s).fit(X, y) for s in ("lbfgs", "lnaq", "lmoq")]
        np.testing.assert_array_equal(fits[0].initial_params_, fits[1].initial_params_)
        np.testing.assert_array_equal(fits[0].initial_params_, fits[2].initial_params_)

    def test_different_random_state_differs(self):
        X, y = make_regression_data()
        a = small_estimator(random_state=0).fit(X, y)
        b = small_estimator(random_state=1).fit(X, y)
        assert not np.array_equal(a.initial_params_, b.initial_params_)


class TestComposition:
    def test_grid_search_over_solvers(self):
        X, y = make_regression_data(n=60)
        grid = GridSearchCV(
            small_estimator(max_iter=30),
            {"solver": ["lbfgs", "lmoq"]},
            cv=2,
        )
        grid.fit(X, y)
        assert grid.best_params_["solver"] in {"lbfgs", "lmoq"}
        assert grid.best_estimator_.predict(X).shape == (len(X),)
