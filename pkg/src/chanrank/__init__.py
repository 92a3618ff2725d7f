"""Utility-based channel ranking for cognitive radio."""

from .ces import (CesParams, ChannelObservation, ParamGrid, RankedChannel, ces_combine,
                  ces_rescaled, fit_ces_params, rank_by_occupancy, rank_channels)
from .errors import (ChanrankError, ConsistencyError, DomainError, EmptyInputError,
                     ParameterError, ParseError)
from .estimator import CesChannelRanker, UtilityTransformer
from .sim import (SensingTrace, SimChannelConfig, energy_detect,
                  estimate_occupancy_frequentist, observe_channel, simulate_trace,
                  threshold_for_false_alarm)
from .utility import (CurveFamily, UtilityCurve, occupancy_curve, sample_curve, snr_curve,
                      utility_occupancy, utility_sinr_hard, utility_snr)

__version__ = "0.1.0"

__all__ = [
    "CesChannelRanker", "CesParams", "ChannelObservation", "ChanrankError", "ConsistencyError",
    "CurveFamily", "DomainError", "EmptyInputError", "ParamGrid", "ParameterError", "ParseError",
    "RankedChannel", "SensingTrace", "SimChannelConfig", "UtilityCurve", "UtilityTransformer",
    "ces_combine", "ces_rescaled", "energy_detect", "estimate_occupancy_frequentist",
    "fit_ces_params", "observe_channel", "occupancy_curve", "rank_by_occupancy", "rank_channels",
    "sample_curve", "simulate_trace", "snr_curve", "threshold_for_false_alarm",
    "utility_occupancy", "utility_sinr_hard", "utility_snr",
]
