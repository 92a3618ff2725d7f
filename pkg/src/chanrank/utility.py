"""Sigmoid-family utility curves for SNR and spectrum occupancy.

Four curve families are supported. Each maps its input to a raw utility
whose ceiling depends on the family (``A`` for the logistic forms,
``2 * input_max`` for the scaled tanh, 1 for the half tanh). Everything
leaving this module is divided by that ceiling, so utilities live in
``[0, 1]``; scaling to 0-100 is left to reports.

Occupancy uses the same families reflected about the midpoint: the
steepness argument ``alpha * (x - midpoint)`` is negated, so low occupancy
earns high utility.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import expit

from .errors import DomainError, ParameterError


class CurveFamily(str, enum.Enum):
    """Utility curve family. Values are the names used on the command line."""

    #: ``A / (1 + exp(-alpha (x - x0)))``
    LOGISTIC_MIDPOINT = "logistic-midpoint"
    #: ``A exp(alpha x) / (1 + exp(alpha x))``
    LOGISTIC = "logistic"
    #: ``x_max (1 + tanh(alpha x))``
    TANH_SCALED = "tanh-scaled"
    #: ``1/2 + 1/2 tanh(x / 2)``
    TANH_HALF = "tanh-half"

    @classmethod
    def parse(cls, name: "str | CurveFamily") -> "CurveFamily":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(f.value for f in cls)
            raise ParameterError(f"unknown curve family {name!r} (choose from {choices})") from None


@dataclass(frozen=True)
class UtilityCurve:
    """A curve family together with its shape parameters.

    ``midpoint`` and ``input_max`` are in the units of the input variable
    (dB for SNR, a fraction for occupancy). All four families accept a
    midpoint; at ``midpoint=0`` each reduces to its textbook form.
    """

    family: CurveFamily = CurveFamily.TANH_HALF
    alpha: float = 0.5
    max_utility: float = 100.0
    midpoint: float = 0.0
    input_max: float = 20.0

    def __post_init__(self):
        object.__setattr__(self, "family", CurveFamily.parse(self.family))
        for name in ("alpha", "max_utility", "midpoint", "input_max"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.alpha <= 0:
            raise ParameterError(f"alpha must be > 0, got {self.alpha}")
        if self.max_utility <= 0:
            raise ParameterError(f"max_utility must be > 0, got {self.max_utility}")
        if self.input_max <= self.midpoint:
            raise ParameterError(
                f"input_max ({self.input_max}) must exceed midpoint ({self.midpoint})"
            )

    @property
    def intrinsic_max(self) -> float:
        """Ceiling of the raw (un-normalized) curve."""
        if self.family in (CurveFamily.LOGISTIC_MIDPOINT, CurveFamily.LOGISTIC):
            return self.max_utility
        if self.family is CurveFamily.TANH_SCALED:
            return 2.0 * self.input_max
        return 1.0

    def _logit(self, x, mirrored: bool):
        # Every family is a logistic in disguise: 1/2 + 1/2 tanh(z) == expit(2 z).
        z = self.alpha * (x - self.midpoint)
        if mirrored:
            z = -z
        if self.family in (CurveFamily.TANH_SCALED, CurveFamily.TANH_HALF):
            z = 2.0 * z
        return z

    def evaluate(self, x, mirrored: bool = False):
        """Normalized utility in [0, 1]; no domain checks."""
        return expit(self._logit(np.asarray(x, dtype=float), mirrored))

    def raw(self, x, mirrored: bool = False):
        """Utility on the family's native scale (e.g. 0-100 for ``A=100``)."""
        return self.intrinsic_max * self.evaluate(x, mirrored)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "UtilityCurve":
        known = {"family", "alpha", "max_utility", "midpoint", "input_max"}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown curve fields: {sorted(unknown)}")
        return cls(**data)


# Steepness values used for the SNR sweep and the occupancy sweep.
_SNR_ALPHA = {
    CurveFamily.LOGISTIC_MIDPOINT: 0.2,
    CurveFamily.LOGISTIC: 0.2,
    CurveFamily.TANH_SCALED: 0.1,
    CurveFamily.TANH_HALF: 0.5,
}
_OCC_ALPHA = {
    CurveFamily.LOGISTIC_MIDPOINT: 5.0,
    CurveFamily.LOGISTIC: 5.0,
    CurveFamily.TANH_SCALED: 5.0,
    CurveFamily.TANH_HALF: 0.5,
}


def snr_curve(family="tanh-half", alpha=None) -> UtilityCurve:
    """SNR curve with the reference parameters (A=100, X_max=20 dB, X_o=0 dB)."""
    family = CurveFamily.parse(family)
    return UtilityCurve(
        family=family,
        alpha=_SNR_ALPHA[family] if alpha is None else alpha,
        max_utility=100.0,
        midpoint=0.0,
        input_max=20.0,
    )


def occupancy_curve(family="tanh-half", alpha=None) -> UtilityCurve:
    """Occupancy curve with midpoint 0.5 on the unit interval."""
    family = CurveFamily.parse(family)
    return UtilityCurve(
        family=family,
        alpha=_OCC_ALPHA[family] if alpha is None else alpha,
        max_utility=100.0,
        midpoint=0.5,
        input_max=1.0,
    )


def _as_scalar_or_array(values, original):
    if np.ndim(original) == 0:
        return float(values)
    return values


def utility_snr(curve: UtilityCurve, snr_db):
    """Utility of an SNR (dB) in [0, 1], strictly increasing.

    Accepts a scalar or an array. Raises :class:`DomainError` on
    non-finite input.
    """
    x = np.asarray(snr_db, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("snr_db must be finite")
    return _as_scalar_or_array(curve.evaluate(x), snr_db)


def utility_occupancy(curve: UtilityCurve, occupancy):
    """Utility of an occupancy fraction in [0, 1], strictly decreasing."""
    y = np.asarray(occupancy, dtype=float)
    if not np.all(np.isfinite(y)) or np.any((y < 0.0) | (y > 1.0)):
        raise DomainError("occupancy must be a fraction in [0, 1]")
    return _as_scalar_or_array(curve.evaluate(y, mirrored=True), occupancy)


def utility_sinr_hard(sinr_db: float, threshold_db: float) -> float:
    """Hard-decision SINR utility: 1.0 at or above the threshold, else 0.0."""
    if not (math.isfinite(sinr_db) and math.isfinite(threshold_db)):
        raise DomainError("sinr_db and threshold_db must be finite")
    return 1.0 if sinr_db >= threshold_db else 0.0


def sample_curve(curve: UtilityCurve, domain_lo: float, domain_hi: float,
                 n_points: int, mirrored: bool = False) -> list[tuple[float, float]]:
    """Evenly spaced ``(x, utility)`` samples, endpoints included."""
    if not (math.isfinite(domain_lo) and math.isfinite(domain_hi)) or domain_lo >= domain_hi:
        raise ParameterError(f"empty domain [{domain_lo}, {domain_hi}]")
    if int(n_points) != n_points or n_points < 2:
        raise ParameterError(f"n_points must be an integer >= 2, got {n_points}")
    xs = np.linspace(domain_lo, domain_hi, int(n_points))
    us = curve.evaluate(xs, mirrored=mirrored)
    return [(float(x), float(u)) for x, u in zip(xs, us)]
