"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .errors import DomainError, EmptyInputError

#: Column order of an observation matrix.
OBSERVATION_COLUMNS = ("frequency_ghz", "snr_db", "occupancy")


def check_observations(X, *, allow_empty=False) -> np.ndarray:
    """Validate an observation matrix and return it as a float ndarray.

    ``X`` is either a sequence of :class:`~chanrank.ces.ChannelObservation`
    or an array-like of shape ``(n, 3)`` with columns
    ``frequency_ghz, snr_db, occupancy`` (occupancy as a fraction).
    """
    if isinstance(X, (list, tuple)) and X and hasattr(X[0], "snr_db"):
        X = [(o.frequency_ghz, o.snr_db, o.occupancy) for o in X]
    if isinstance(X, (list, tuple)) and len(X) == 0:
        if allow_empty:
            return np.empty((0, 3))
        raise EmptyInputError("no observations given")
    try:
        X = check_array(X, dtype=float, ensure_all_finite=True)
    except ValueError as exc:
        if "minimum of 1 is required" in str(exc):
            raise EmptyInputError("no observations given") from None
        raise DomainError(str(exc)) from None
    if X.shape[1] != 3:
        raise DomainError(
            f"observations need 3 columns {OBSERVATION_COLUMNS}, got {X.shape[1]}"
        )
    if np.any(X[:, 0] <= 0):
        raise DomainError("frequency_ghz must be > 0")
    if np.any((X[:, 2] < 0) | (X[:, 2] > 1)):
        raise DomainError("occupancy must be a fraction in [0, 1]")
    return X


def check_unit_interval(name, value):
    """Raise :class:`DomainError` unless every element lies in [0, 1]."""
    v = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(v)) or np.any((v < 0.0) | (v > 1.0)):
        raise DomainError(f"{name} must lie in [0, 1]")
    return v
