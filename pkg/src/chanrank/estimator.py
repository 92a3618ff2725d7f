"""scikit-learn compatible wrappers around the utility and CES machinery.

Both estimators take observation matrices of shape ``(n, 3)`` with columns
``frequency_ghz, snr_db, occupancy`` (occupancy as a fraction), or a list of
:class:`~chanrank.ces.ChannelObservation`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .ces import (CesParams, ParamGrid, RankedChannel, _order, _ranks_from_order,
                  ces_rescaled, default_curves, fit_ces_params, kendall_tau_b,
                  rank_channels)
from .errors import ConsistencyError
from .validation import check_observations


def _reference_pairs(y, n):
    """Turn a rank vector (NaN = unranked) into ``(index, rank)`` pairs."""
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != n:
        raise ConsistencyError(f"y has {y.shape[0]} entries for {n} observations")
    return [(i, r) for i, r in enumerate(y) if np.isfinite(r)]


class UtilityTransformer(TransformerMixin, BaseEstimator):
    """Map observations to ``[u_snr, u_occ]`` columns in [0, 1].

    Stateless; ``fit`` only validates and records ``n_features_in_``.
    """

    def __init__(self, snr_curve=None, occ_curve=None):
        self.snr_curve = snr_curve
        self.occ_curve = occ_curve

    def fit(self, X, y=None):
        X = check_observations(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_observations(X)
        d_snr, d_occ = default_curves()
        u_s = (self.snr_curve or d_snr).evaluate(X[:, 1])
        u_o = (self.occ_curve or d_occ).evaluate(X[:, 2], mirrored=True)
        return np.column_stack([u_s, u_o])

    def get_feature_names_out(self, input_features=None):
        return np.array(["u_snr", "u_occ"], dtype=object)


class CesChannelRanker(BaseEstimator):
    """Rank channels by CES-combined utility.

    Parameters
    ----------
    snr_curve, occ_curve : UtilityCurve or None
        Utility curves; ``None`` selects the half-tanh defaults.
    sigma, w_snr : float
        CES elasticity and SNR weight used when ``fit`` gets no ``y``.
    grid : ParamGrid or None
        Search grid used when ``fit`` is given a reference ranking.

    Attributes
    ----------
    params_ : CesParams
        Parameters in use after ``fit``.
    tau_ : float or None
        Kendall tau-b achieved against the reference ranking, if one was given.
    """

    def __init__(self, snr_curve=None, occ_curve=None, sigma=0.5, w_snr=0.5, grid=None):
        self.snr_curve = snr_curve
        self.occ_curve = occ_curve
        self.sigma = sigma
        self.w_snr = w_snr
        self.grid = grid

    def _curves(self):
        d_snr, d_occ = default_curves()
        return self.snr_curve or d_snr, self.occ_curve or d_occ

    def fit(self, X, y=None):
        """Fix the CES parameters, or search them if ``y`` holds reference ranks.

        ``y`` has one entry per observation: its reference rank, or NaN when
        the observation is not part of the reference.
        """
        X = check_observations(X)
        self.n_features_in_ = X.shape[1]
        if y is None:
            self.params_ = CesParams.from_w_snr(self.w_snr, self.sigma)
            self.tau_ = None
            return self
        snr_c, occ_c = self._curves()
        self.params_, self.tau_ = fit_ces_params(
            X.tolist(), _reference_pairs(y, X.shape[0]), snr_c, occ_c,
            self.grid or ParamGrid())
        return self

    def decision_function(self, X):
        """Combined utility in [0, 1] for each observation."""
        check_is_fitted(self, "params_")
        X = check_observations(X)
        snr_c, occ_c = self._curves()
        u_s = snr_c.evaluate(X[:, 1])
        u_o = occ_c.evaluate(X[:, 2], mirrored=True)
        return ces_rescaled(self.params_, u_s, u_o)

    def predict(self, X):
        """Rank of each observation within ``X`` (1 = best)."""
        X = check_observations(X)
        comb = self.decision_function(X)
        return _ranks_from_order(_order(comb, X[:, 1], X[:, 2]))

    def score(self, X, y):
        """Kendall tau-b between predicted ranks and reference ranks ``y``."""
        X = check_observations(X)
        pairs = _reference_pairs(y, X.shape[0])
        idx = np.array([i for i, _ in pairs], dtype=int)
        ref = np.array([r for _, r in pairs])
        return kendall_tau_b(self.predict(X)[idx], ref)

    def rank(self, observations) -> list[RankedChannel]:
        """Full ranked list, best first."""
        check_is_fitted(self, "params_")
        snr_c, occ_c = self._curves()
        return rank_channels(observations, snr_c, occ_c, self.params_)
