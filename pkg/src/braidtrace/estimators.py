"""scikit-learn style wrappers.

``X`` is a sequence of braids (``BraidWord`` or anything ``as_braid`` accepts);
``predict`` returns complex knot values.  ``fit`` only validates parameters,
there is nothing to learn.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from . import dqc1
from .braid import as_braid


class _KnotValueEstimator(BaseEstimator):
    def fit(self, X=None, y=None):
        if self.k < 3:
            raise ValueError(f"k must be >= 3, got {self.k}")
        if self.mode not in dqc1.MODES:
            raise ValueError(f"mode must be one of {dqc1.MODES}, got {self.mode!r}")
        self.n_features_in_ = 1
        self.is_fitted_ = True
        return self

    def _estimates(self, X):
        if not getattr(self, "is_fitted_", False):
            self.fit()
        return [self._one(as_braid(b)) for b in X]

    def predict(self, X) -> np.ndarray:
        est = self._estimates(X)
        self.std_errors_ = np.array([e.std_error for e in est])
        self.systematic_bounds_ = np.array([e.systematic_bound for e in est])
        return np.array([e.value for e in est], dtype=complex)

    def estimate(self, X) -> list[dqc1.KnotEstimate]:
        return self._estimates(X)


class JonesEstimator(_KnotValueEstimator):
    def __init__(self, k=5, beta=None, samples=dqc1.DEFAULT_SAMPLES, mode="monte_carlo", seed=0, threads=None):
        self.k = k
        self.beta = beta
        self.samples = samples
        self.mode = mode
        self.seed = seed
        self.threads = threads

    def _one(self, b):
        return dqc1.estimate_jones(b, self.k, self.beta, self.samples, dqc1.RngConfig(self.seed),
                                   mode=self.mode, threads=self.threads)


class HomflyEstimator(_KnotValueEstimator):
    def __init__(self, k=6, r=3, beta=None, samples=dqc1.DEFAULT_SAMPLES, mode="monte_carlo", seed=0, threads=None):
        self.k = k
        self.r = r
        self.beta = beta
        self.samples = samples
        self.mode = mode
        self.seed = seed
        self.threads = threads

    def fit(self, X=None, y=None):
        if not 2 <= self.r < self.k:
            raise ValueError(f"need 2 <= r < k, got r={self.r}, k={self.k}")
        return super().fit(X, y)

    def _one(self, b):
        return dqc1.estimate_homfly(b, self.k, self.r, self.beta, self.samples, dqc1.RngConfig(self.seed),
                                    mode=self.mode, threads=self.threads)
