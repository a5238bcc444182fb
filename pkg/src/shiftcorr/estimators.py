"""scikit-learn style wrappers around the pair-correlation computation.

``PairCorrelationEstimator`` is fitted on a zero multiset and maps an
``alpha`` grid to ``F_lam(alpha)``.  ``ConventionSelector`` is fitted on an
empirical curve and picks whichever normalization of the prediction it
tracks more closely.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted, column_or_1d

from .asymptotics import CONVENTIONS, thm12_prediction
from .correlation import BIN_WIDTH, PAIR_BUDGET, f_lambda
from .errors import EmptyZeroSet
from .zero_data import LambdaZeroSet


def _grid(alpha) -> np.ndarray:
    return column_or_1d(np.atleast_1d(np.asarray(alpha, dtype=float)))


class PairCorrelationEstimator(TransformerMixin, BaseEstimator):
    """``fit`` stores the ordinates, ``transform(alpha)`` returns ``F_lam(alpha)``.

    ``X`` may be a :class:`LambdaZeroSet` or any 1-d array of ordinates
    (assumed symmetric about 0).  ``T`` defaults to the set's window, or to
    ``max |gamma|`` for a bare array.
    """

    def __init__(self, T=None, method="direct", bin_width=BIN_WIDTH, workers=1, pair_budget=PAIR_BUDGET):
        self.T = T
        self.method = method
        self.bin_width = bin_width
        self.workers = workers
        self.pair_budget = pair_budget

    def fit(self, X, y=None):
        if isinstance(X, LambdaZeroSet):
            g = np.array(X.ordinates)
            window = X.window
            self.lam_ = X.lam
        else:
            g = np.sort(column_or_1d(np.asarray(X, dtype=float)))
            window = float(np.max(np.abs(g))) if g.size else 0.0
            self.lam_ = None
        if g.size == 0:
            raise EmptyZeroSet("cannot fit on an empty zero set")
        self.ordinates_ = g
        self.T_ = float(self.T) if self.T is not None else window
        self.n_zeros_ = int(g.size)
        return self

    def transform(self, X):
        check_is_fitted(self, "ordinates_")
        vals, info = f_lambda(
            self.ordinates_,
            _grid(X),
            T=self.T_,
            method=self.method,
            bin_width=self.bin_width,
            workers=self.workers,
            pair_budget=self.pair_budget,
            return_info=True,
        )
        self.method_used_ = info["method"]
        return vals


class ConventionSelector(BaseEstimator):
    """Choose between the candidate normalizations by RMS distance.

    The choice is ``decisive_`` when the loser's RMS is at least ``ratio``
    times the winner's.  ``winner_`` is set either way.
    """

    def __init__(self, lam=1.0, T=1000.0, ratio=2.0, conventions=CONVENTIONS):
        self.lam = lam
        self.T = T
        self.ratio = ratio
        self.conventions = conventions

    def fit(self, X, y):
        alpha = _grid(X)
        f = column_or_1d(np.asarray(y, dtype=float))
        if f.shape != alpha.shape:
            raise ValueError(f"alpha has {alpha.size} points but F has {f.size}")
        self.rms_ = {
            c: math.sqrt(float(np.mean((f - thm12_prediction(alpha, self.T, self.lam, c)) ** 2)))
            for c in self.conventions
        }
        ranked = sorted(self.rms_, key=self.rms_.get)
        self.winner_ = ranked[0]
        best, second = self.rms_[ranked[0]], self.rms_[ranked[1]]
        self.decisive_ = bool(best * self.ratio <= second)
        return self

    def predict(self, X):
        check_is_fitted(self, "winner_")
        return np.asarray(thm12_prediction(_grid(X), self.T, self.lam, self.winner_), dtype=float)
