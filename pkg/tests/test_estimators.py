import numpy as np
import pytest
from sklearn.base import clone

from braidtrace.estimators import HomflyEstimator, JonesEstimator
from braidtrace.jones_wenzl import homfly_value
from braidtrace.path_model import jones_value
from braidtrace.braid import parse_braid


def test_get_set_params_and_clone():
    est = JonesEstimator(k=7, samples=500)
    assert est.get_params()["k"] == 7
    est.set_params(seed=3)
    assert clone(est).get_params()["seed"] == 3


def test_predict_matches_exact():
    X = [parse_braid("1 1 1", 2), "1 -2 1 -2"]
    pred = JonesEstimator(k=5, beta=6, mode="exact").fit(X).predict(X)
    exact = np.array([jones_value(parse_braid("1 1 1", 2), 5), jones_value(parse_braid("1 -2 1 -2", 3), 5)])
    assert pred.dtype == complex
    est = JonesEstimator(k=5, beta=6, mode="exact")
    est.predict(X)
    assert np.all(np.abs(pred - exact) <= est.systematic_bounds_ + 1e-12)


def test_homfly_predict():
    est = HomflyEstimator(k=6, r=3, beta=5, mode="exact")
    pred = est.fit().predict([[1, 1, 1]])
    assert abs(pred[0] - homfly_value(parse_braid("1 1 1", 2), 6, 3)) <= est.systematic_bounds_[0] + 1e-12


def test_fit_validates():
    with pytest.raises(ValueError):
        JonesEstimator(k=2).fit()
    with pytest.raises(ValueError):
        HomflyEstimator(k=4, r=4).fit()
