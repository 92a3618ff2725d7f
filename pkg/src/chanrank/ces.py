"""CES combination of SNR and occupancy utilities, and channel ranking.

The combiner is additive, with no outer exponent::

    U = w_snr**(1 - sigma) * U_snr**sigma + w_occ**(1 - sigma) * U_occ**sigma

Its maximum (both utilities at 1) is ``w_snr**(1-sigma) + w_occ**(1-sigma)``;
dividing by it gives a combined utility in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import kendalltau

from .errors import ConsistencyError, DomainError, EmptyInputError, ParameterError
from .utility import UtilityCurve, occupancy_curve, snr_curve
from .validation import check_observations, check_unit_interval


@dataclass(frozen=True)
class ChannelObservation:
    """One sensed channel. ``occupancy`` is a fraction, not a percentage."""

    frequency_ghz: float
    snr_db: float
    occupancy: float

    def __post_init__(self):
        for name in ("frequency_ghz", "snr_db", "occupancy"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.frequency_ghz <= 0:
            raise DomainError(f"frequency_ghz must be > 0, got {self.frequency_ghz}")
        if not 0.0 <= self.occupancy <= 1.0:
            raise DomainError(f"occupancy must be in [0, 1], got {self.occupancy}")

    @classmethod
    def from_percent(cls, frequency_ghz, snr_db, occupancy_pct):
        return cls(frequency_ghz, snr_db, float(occupancy_pct) / 100.0)


@dataclass(frozen=True)
class CesParams:
    """CES weights and elasticity. Weights are normalized to sum to 1."""

    w_snr: float = 0.5
    w_occ: float = 0.5
    sigma: float = 0.5

    def __post_init__(self):
        w_snr, w_occ, sigma = float(self.w_snr), float(self.w_occ), float(self.sigma)
        if not (math.isfinite(w_snr) and math.isfinite(w_occ)) or w_snr <= 0 or w_occ <= 0:
            raise ParameterError(f"weights must be finite and > 0, got {w_snr}, {w_occ}")
        if not (0.0 < sigma <= 1.0):
            raise ParameterError(f"sigma must lie in (0, 1], got {sigma}")
        total = w_snr + w_occ
        object.__setattr__(self, "w_snr", w_snr / total)
        object.__setattr__(self, "w_occ", w_occ / total)
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def from_w_snr(cls, w_snr, sigma=0.5):
        if not 0.0 < w_snr < 1.0:
            raise ParameterError(f"w_snr must lie in (0, 1), got {w_snr}")
        return cls(w_snr=w_snr, w_occ=1.0 - w_snr, sigma=sigma)

    @property
    def rho(self) -> float:
        """``1 / (1 - sigma)``; ``math.inf`` at sigma = 1 (perfect substitutes)."""
        if self.sigma == 1.0:
            return math.inf
        return 1.0 / (1.0 - self.sigma)

    @property
    def max_value(self) -> float:
        e = 1.0 - self.sigma
        return self.w_snr ** e + self.w_occ ** e

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "w_snr": self.w_snr, "w_occ": self.w_occ}


@dataclass(frozen=True)
class RankedChannel:
    """An observation with its utilities and rank (1 = best).

    ``u_snr`` and ``u_occ`` are in [0, 1]; ``combined`` is on the 0-100
    display scale at full precision.
    """

    observation: ChannelObservation
    u_snr: float
    u_occ: float
    combined: float
    rank: int

    @property
    def combined_display(self) -> int:
        return round_half_up(self.combined)


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def ces_combine(params: CesParams, u_snr, u_occ):
    """Raw CES value. Works elementwise on arrays."""
    a = check_unit_interval("u_snr", u_snr)
    b = check_unit_interval("u_occ", u_occ)
    e = 1.0 - params.sigma
    out = params.w_snr ** e * a ** params.sigma + params.w_occ ** e * b ** params.sigma
    if np.ndim(out) == 0:
        return float(out)
    return out


def ces_rescaled(params: CesParams, u_snr, u_occ):
    """CES value divided by its maximum, in [0, 1]."""
    return ces_combine(params, u_snr, u_occ) / params.max_value


def default_curves() -> tuple[UtilityCurve, UtilityCurve]:
    """Half-tanh curves on both sides (SNR alpha 0.5, occupancy alpha 0.5, midpoint 0.5)."""
    return snr_curve("tanh-half"), occupancy_curve("tanh-half")


def _score_arrays(X, snr_curve_, occ_curve_, params):
    u_s = snr_curve_.evaluate(X[:, 1])
    u_o = occ_curve_.evaluate(X[:, 2], mirrored=True)
    return u_s, u_o, ces_rescaled(params, u_s, u_o)


def _order(combined, snr, occ):
    """Indices best-first: combined desc, SNR desc, occupancy asc, input order."""
    idx = np.arange(len(combined))
    return np.lexsort((idx, occ, -snr, -combined))


def _ranks_from_order(order):
    ranks = np.empty(len(order), dtype=int)
    ranks[order] = np.arange(1, len(order) + 1)
    return ranks


def _as_observations(observations) -> list[ChannelObservation]:
    obs = list(observations)
    if not obs:
        raise EmptyInputError("no observations to rank")
    return [o if isinstance(o, ChannelObservation) else ChannelObservation(*o) for o in obs]


def rank_channels(observations: Sequence[ChannelObservation],
                  snr_curve: UtilityCurve | None = None,
                  occ_curve: UtilityCurve | None = None,
                  params: CesParams | None = None) -> list[RankedChannel]:
    """Rank channels by combined CES utility, best first.

    Ties in combined utility go to the higher SNR, then the lower
    occupancy, then the earlier input position.
    """
    obs = _as_observations(observations)
    d_snr, d_occ = default_curves()
    snr_curve = snr_curve or d_snr
    occ_curve = occ_curve or d_occ
    params = params or CesParams()
    X = check_observations(obs)
    u_s, u_o, comb = _score_arrays(X, snr_curve, occ_curve, params)
    order = _order(comb, X[:, 1], X[:, 2])
    return [
        RankedChannel(obs[i], float(u_s[i]), float(u_o[i]), 100.0 * float(comb[i]), r)
        for r, i in enumerate(order, start=1)
    ]


def rank_by_occupancy(observations: Sequence[ChannelObservation],
                      snr_curve: UtilityCurve | None = None,
                      occ_curve: UtilityCurve | None = None,
                      params: CesParams | None = None) -> list[RankedChannel]:
    """Occupancy-only baseline: lowest occupancy first.

    Utilities are filled in for reporting but play no part in the order.
    Ties go to the higher SNR, then the lower frequency.
    """
    obs = _as_observations(observations)
    d_snr, d_occ = default_curves()
    X = check_observations(obs)
    u_s, u_o, comb = _score_arrays(X, snr_curve or d_snr, occ_curve or d_occ,
                                   params or CesParams())
    order = np.lexsort((np.arange(len(obs)), X[:, 0], -X[:, 1], X[:, 2]))
    return [
        RankedChannel(obs[i], float(u_s[i]), float(u_o[i]), 100.0 * float(comb[i]), r)
        for r, i in enumerate(order, start=1)
    ]


@dataclass(frozen=True)
class ParamGrid:
    """Candidate values for the CES grid search."""

    sigmas: tuple[float, ...] = field(
        default_factory=lambda: tuple(round(0.1 * k, 10) for k in range(1, 11)))
    w_snrs: tuple[float, ...] = field(
        default_factory=lambda: tuple(round(0.05 * k, 10) for k in range(1, 20)))

    def __post_init__(self):
        sig = tuple(sorted(float(s) for s in self.sigmas))
        ws = tuple(sorted(float(w) for w in self.w_snrs))
        if not sig or not ws:
            raise ParameterError("parameter grid is empty")
        if any(not 0.0 < s <= 1.0 for s in sig):
            raise ParameterError("grid sigmas must lie in (0, 1]")
        if any(not 0.0 < w < 1.0 for w in ws):
            raise ParameterError("grid w_snr values must lie in (0, 1)")
        object.__setattr__(self, "sigmas", sig)
        object.__setattr__(self, "w_snrs", ws)

    @classmethod
    def from_steps(cls, sigma_step=0.1, w_step=0.05):
        """Grid ``sigma in {step, 2 step, ..., 1}`` and ``w_snr in {step, ..., 1 - step}``."""
        if not 0 < sigma_step <= 1 or not 0 < w_step < 0.5:
            raise ParameterError("grid steps out of range")
        n_s = int(round(1.0 / sigma_step))
        n_w = int(round(1.0 / w_step))
        sigmas = [round(sigma_step * k, 10) for k in range(1, n_s + 1)]
        w_snrs = [round(w_step * k, 10) for k in range(1, n_w)]
        return cls(tuple(s for s in sigmas if s <= 1.0), tuple(w for w in w_snrs if w < 1.0))

    def __iter__(self):
        for s in self.sigmas:
            for w in self.w_snrs:
                yield s, w

    def __len__(self):
        return len(self.sigmas) * len(self.w_snrs)


def _check_reference(reference_ranking, n_obs):
    pairs = list(reference_ranking)
    if len(pairs) < 2:
        raise ConsistencyError("reference ranking needs at least 2 entries")
    idx = np.array([int(i) for i, _ in pairs])
    ranks = np.array([float(r) for _, r in pairs])
    if np.any(idx < 0) or np.any(idx >= n_obs):
        bad = sorted(set(idx[(idx < 0) | (idx >= n_obs)].tolist()))
        raise ConsistencyError(f"reference ranking names unknown observation indices {bad}")
    if len(set(idx.tolist())) != len(idx):
        raise ConsistencyError("reference ranking lists an observation twice")
    if np.all(ranks == ranks[0]):
        raise ConsistencyError("reference ranking assigns every observation the same rank")
    return idx, ranks


def kendall_tau_b(a, b) -> float:
    return float(kendalltau(a, b).statistic)


def fit_ces_params(observations: Sequence[ChannelObservation],
                   reference_ranking,
                   snr_curve: UtilityCurve | None = None,
                   occ_curve: UtilityCurve | None = None,
                   grid: ParamGrid | None = None) -> tuple[CesParams, float]:
    """Grid-search CES parameters that best reproduce a reference ranking.

    ``reference_ranking`` is a sequence of ``(observation_index, rank)``
    pairs covering any subset of ``observations``. The induced ranking is
    the full :func:`rank_channels` order restricted to that subset, and
    agreement is Kendall's tau-b. Ties in the score go to the smaller
    sigma, then the smaller ``w_snr``.
    """
    obs = _as_observations(observations)
    X = check_observations(obs)
    idx, ref = _check_reference(reference_ranking, len(obs))
    d_snr, d_occ = default_curves()
    u_s = (snr_curve or d_snr).evaluate(X[:, 1])
    u_o = (occ_curve or d_occ).evaluate(X[:, 2], mirrored=True)
    grid = grid or ParamGrid()

    best = None
    for sigma, w in grid:  # sorted ascending, so strict '>' keeps the smallest on ties
        params = CesParams.from_w_snr(w, sigma)
        comb = ces_rescaled(params, u_s, u_o)
        ranks = _ranks_from_order(_order(comb, X[:, 1], X[:, 2]))
        tau = kendall_tau_b(ranks[idx], ref)
        if math.isnan(tau):
            continue
        if best is None or tau > best[1] + 1e-12:
            best = (params, tau)
    if best is None:
        raise ConsistencyError("tau-b undefined for every grid point")
    return best
