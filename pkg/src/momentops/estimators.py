"""Scikit-learn style estimators wrapping the operator and classifier cores.

The transformers treat a 2-d array as a batch of Taylor coefficient rows and
apply one operator (fixed by the measure parameter) to every row, so the
package composes with pipelines and the rest of the scikit-learn ecosystem.
The classifier maps measures to a coarse operator class on a fixed pair of
power weights.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._validation import as_coefficient_matrix
from .criteria import Verdict, classify_growth
from .measures import DEFAULT_TRUNCATION, Measure
from .operators import FFT_MIN_WIDTH, cesaro_apply, hilbert_apply, \
    hilbert_apply_fast


class _MomentTransformer(BaseEstimator, TransformerMixin):
    """Shared fit/validation plumbing for the moment-kernel transformers."""

    #: moments required for input width n
    _moments_needed = staticmethod(lambda n: n)

    def __init__(self, measure="lebesgue", truncation=None):
        self.measure = measure
        self.truncation = truncation

    def fit(self, X, y=None):
        X = as_coefficient_matrix(X)
        self.measure_ = Measure.from_spec(self.measure)
        width = X.shape[1]
        if self.truncation is not None and self.truncation + 1 < self._moments_needed(width):
            raise ValueError(
                f"truncation {self.truncation} too small for width {width}")
        n = self._moments_needed(width) - 1
        if self.truncation is not None:
            n = max(n, self.truncation)
        self.moments_ = self.measure_.moments(n)
        self.n_features_in_ = width
        return self

    def _check_input(self, X):
        if not hasattr(self, "moments_"):
            raise NotFittedError(
                f"{type(self).__name__} must be fitted before transform")
        X = as_coefficient_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"width {X.shape[1]} does not match fit width "
                f"{self.n_features_in_}")
        return X


class HankelTransformer(_MomentTransformer):
    """Row-wise application of b_n = sum_k mu_{n+k} a_k.

    Parameters
    ----------
    measure : str, mapping or Measure
        The measure whose moments fill the kernel.
    truncation : int, optional
        Extra moments to precompute beyond what the input width needs.
    method : {"auto", "fft", "direct"}
        "direct" is the quadratic-cost reference summation; "fft" the
        circulant-embedding fast path; "auto" picks by width.
    """

    _moments_needed = staticmethod(lambda n: 2 * n - 1)

    def __init__(self, measure="lebesgue", truncation=None, method="auto"):
        super().__init__(measure, truncation)
        self.method = method

    def transform(self, X):
        X = self._check_input(X)
        if self.method not in ("auto", "fft", "direct"):
            raise ValueError(f"unknown method {self.method!r}")
        use_fft = self.method == "fft" or (
            self.method == "auto" and X.shape[1] >= FFT_MIN_WIDTH)
        if use_fft:
            return hilbert_apply_fast(self.moments_, X)
        return np.vstack([hilbert_apply(self.moments_, row) for row in X])


class CesaroTransformer(_MomentTransformer):
    """Row-wise application of c_k = mu_k * (a_0 + ... + a_k)."""

    def transform(self, X):
        X = self._check_input(X)
        return np.vstack([cesaro_apply(self.moments_, row) for row in X])


class GrowthSpaceClassifier(BaseEstimator):
    """Classify measures by their operator behaviour between power weights.

    ``predict`` maps each measure spec to the strongest label its
    classification supports: "compact" > "bounded" > "unbounded" >
    "ill-defined", with "inconclusive" for indeterminate numerics.
    ``classify`` exposes the full report for a single measure.
    """

    _labels = ("ill-defined", "unbounded", "bounded", "compact", "inconclusive")

    def __init__(self, gamma=0.5, delta=0.0, truncation=DEFAULT_TRUNCATION):
        self.gamma = gamma
        self.delta = delta
        self.truncation = truncation

    def fit(self, X=None, y=None):
        # decision rules are stateless; fit validates the parameters once
        classify_growth(Measure.lebesgue(), self.gamma, self.delta,
                        truncation=64)
        self.is_fitted_ = True
        return self

    def classify(self, measure):
        return classify_growth(Measure.from_spec(measure), self.gamma,
                               self.delta, truncation=self.truncation)

    def predict(self, X):
        if not getattr(self, "is_fitted_", False):
            raise NotFittedError("GrowthSpaceClassifier must be fitted first")
        measures = X if isinstance(X, (list, tuple)) else [X]
        out = []
        for m in measures:
            r = self.classify(m)
            if r.well_defined is Verdict.NO:
                out.append("ill-defined")
            elif r.compact is Verdict.YES:
                out.append("compact")
            elif r.bounded is Verdict.YES:
                out.append("bounded")
            elif r.bounded is Verdict.NO:
                out.append("unbounded")
            else:
                out.append("inconclusive")
        return np.asarray(out, dtype=object)
