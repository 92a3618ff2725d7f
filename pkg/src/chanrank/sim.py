"""Synthetic spectrum sensing: ON/OFF primary user, energy detector, occupancy estimate.

Traffic is a two-state Markov chain with geometric holding times. Each slot
the detector averages ``N`` squared real samples; under noise only the
scaled statistic ``N * E / noise_power`` is chi-square with ``N`` degrees
of freedom, which is what the threshold calibration inverts.

Randomness comes from :class:`numpy.random.Generator` with the PCG64 bit
generator, seeded by an integer, so a seed fully determines a run.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq
from scipy.stats import chi2

from .ces import ChannelObservation
from .errors import DomainError, EmptyInputError, ParameterError

# Cap on the number of normal draws held in memory at once.
_CHUNK_SAMPLES = 1 << 22


@dataclass(frozen=True)
class SimChannelConfig:
    """Ground truth for one simulated channel.

    ``mean_hold_slots`` is the mean sojourn of the *rarer* state; the other
    state's mean sojourn is stretched so the stationary ON probability
    equals ``duty_cycle``.
    """

    frequency_ghz: float
    true_snr_db: float
    duty_cycle: float
    mean_hold_slots: float = 5.0
    noise_power: float = 1.0

    def __post_init__(self):
        for name in ("frequency_ghz", "true_snr_db", "duty_cycle", "mean_hold_slots", "noise_power"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.frequency_ghz <= 0:
            raise ParameterError("frequency_ghz must be > 0")
        if not 0.0 < self.duty_cycle < 1.0:
            raise ParameterError(f"duty_cycle must lie in (0, 1), got {self.duty_cycle}")
        if self.mean_hold_slots < 1.0:
            raise ParameterError("mean_hold_slots must be >= 1")
        if self.noise_power <= 0:
            raise ParameterError("noise_power must be > 0")

    @property
    def mean_on_slots(self) -> float:
        d, m = self.duty_cycle, self.mean_hold_slots
        return m if d <= 0.5 else m * d / (1.0 - d)

    @property
    def mean_off_slots(self) -> float:
        d, m = self.duty_cycle, self.mean_hold_slots
        return m * (1.0 - d) / d if d <= 0.5 else m

    @property
    def transition_probs(self) -> tuple[float, float]:
        """``(P(ON -> OFF), P(OFF -> ON))`` per slot."""
        return 1.0 / self.mean_on_slots, 1.0 / self.mean_off_slots


class SlotRecord(NamedTuple):
    true_state: bool
    measured_energy: float
    busy: bool


@dataclass(frozen=True, eq=False)
class SensingTrace:
    """Per-slot truth, measured energy and detector decision."""

    states: np.ndarray
    energies: np.ndarray
    decisions: np.ndarray
    threshold: float
    samples_per_slot: int
    seed: int

    def __len__(self):
        return len(self.states)

    @property
    def slots(self) -> list[SlotRecord]:
        return [SlotRecord(bool(s), float(e), bool(d))
                for s, e, d in zip(self.states, self.energies, self.decisions)]

    def identical_to(self, other: "SensingTrace") -> bool:
        return (self.seed == other.seed
                and self.threshold == other.threshold
                and self.samples_per_slot == other.samples_per_slot
                and np.array_equal(self.states, other.states)
                and np.array_equal(self.energies, other.energies)
                and np.array_equal(self.decisions, other.decisions))


def _check_positive_int(name, value):
    if int(value) != value or value < 1:
        raise ParameterError(f"{name} must be a positive integer, got {value}")
    return int(value)


def simulate_states(config: SimChannelConfig, n_slots: int, rng: np.random.Generator) -> np.ndarray:
    """ON/OFF sequence from the two-state chain, started in its stationary law."""
    n_slots = _check_positive_int("n_slots", n_slots)
    p_off, p_on = config.transition_probs
    u = rng.random(n_slots)
    states = np.empty(n_slots, dtype=bool)
    state = u[0] < config.duty_cycle
    states[0] = state
    for t in range(1, n_slots):
        state = (u[t] >= p_off) if state else (u[t] < p_on)
        states[t] = state
    return states


def measure_energy(states, samples_per_slot: int, snr_db: float, noise_power: float,
                   rng: np.random.Generator) -> np.ndarray:
    """Average energy of ``samples_per_slot`` real samples per slot.

    OFF slots see zero-mean Gaussian noise of variance ``noise_power``; ON
    slots add a constant amplitude ``sqrt(noise_power * 10**(snr_db/10))``.
    """
    n = _check_positive_int("samples_per_slot", samples_per_slot)
    if noise_power <= 0:
        raise ParameterError("noise_power must be > 0")
    states = np.asarray(states, dtype=bool)
    amplitude = math.sqrt(noise_power * 10.0 ** (snr_db / 10.0))
    sigma = math.sqrt(noise_power)
    energies = np.empty(len(states))
    per_chunk = max(1, _CHUNK_SAMPLES // n)
    for start in range(0, len(states), per_chunk):
        on = states[start:start + per_chunk]
        x = rng.normal(0.0, sigma, size=(len(on), n))
        x += np.where(on, amplitude, 0.0)[:, None]
        energies[start:start + per_chunk] = np.mean(x * x, axis=1)
    return energies


def energy_detect(measured_energy: float, threshold: float) -> bool:
    """True (busy) iff the energy is strictly above the threshold."""
    if not math.isfinite(measured_energy) or measured_energy < 0:
        raise DomainError(f"measured energy must be finite and >= 0, got {measured_energy}")
    if not math.isfinite(threshold) or threshold <= 0:
        raise DomainError(f"threshold must be finite and > 0, got {threshold}")
    return measured_energy > threshold


def threshold_for_false_alarm(target_pfa: float, samples_per_slot: int,
                              noise_power: float = 1.0) -> float:
    """Detector threshold on the mean energy giving false-alarm rate ``target_pfa``.

    Solves ``chi2.sf(q, N) = target_pfa`` for ``q`` by bracketed root finding
    and returns ``noise_power * q / N``.
    """
    if not 0.0 < target_pfa < 1.0:
        raise DomainError(f"target_pfa must lie strictly between 0 and 1, got {target_pfa}")
    n = _check_positive_int("samples_per_slot", samples_per_slot)
    if not noise_power > 0:
        raise ParameterError("noise_power must be > 0")

    def excess(q):
        return chi2.sf(q, n) - target_pfa

    lo, hi = 0.0, float(n)
    while excess(hi) > 0:
        hi *= 2.0
    q = brentq(excess, lo, hi, xtol=1e-300, rtol=1e-10, maxiter=500)
    return noise_power * q / n


def estimate_occupancy_frequentist(trace) -> float:
    """Fraction of slots the detector called busy.

    Accepts a :class:`SensingTrace` or any sequence of boolean decisions.
    """
    decisions = trace.decisions if isinstance(trace, SensingTrace) else trace
    decisions = np.asarray(decisions, dtype=bool)
    if decisions.size == 0:
        raise EmptyInputError("cannot estimate occupancy from an empty trace")
    return int(np.count_nonzero(decisions)) / decisions.size


def simulate_trace(config: SimChannelConfig, n_slots: int, samples_per_slot: int,
                   seed: int, target_pfa: float = 0.05) -> SensingTrace:
    """Run the full sensing chain for one channel."""
    n_slots = _check_positive_int("n_slots", n_slots)
    samples_per_slot = _check_positive_int("samples_per_slot", samples_per_slot)
    threshold = threshold_for_false_alarm(target_pfa, samples_per_slot, config.noise_power)
    rng = np.random.default_rng(seed)
    states = simulate_states(config, n_slots, rng)
    energies = measure_energy(states, samples_per_slot, config.true_snr_db,
                              config.noise_power, rng)
    return SensingTrace(states, energies, energies > threshold, threshold,
                        samples_per_slot, int(seed))


def observe_channel(config: SimChannelConfig, n_slots: int, samples_per_slot: int,
                    target_pfa: float, seed: int) -> ChannelObservation:
    """Simulate a channel and package it as an observation (true SNR, estimated occupancy)."""
    trace = simulate_trace(config, n_slots, samples_per_slot, seed, target_pfa)
    return ChannelObservation(config.frequency_ghz, config.true_snr_db,
                              estimate_occupancy_frequentist(trace))


@dataclass(frozen=True)
class Scenario:
    channels: tuple[SimChannelConfig, ...]
    n_slots: int = 10_000
    samples_per_slot: int = 100
    target_pfa: float = 0.01


def parse_scenario(text: str) -> Scenario:
    """Parse an INI scenario.

    A ``[simulation]`` section may set ``n_slots``, ``samples_per_slot`` and
    ``target_pfa``. Every section named ``channel`` or ``channel.<label>``
    describes one channel with the :class:`SimChannelConfig` fields.
    """
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ParameterError(f"bad scenario file: {exc}") from None
    sim = cp["simulation"] if cp.has_section("simulation") else {}
    known_sim = {"n_slots", "samples_per_slot", "target_pfa"}
    if set(sim) - known_sim:
        raise ParameterError(f"unknown [simulation] keys: {sorted(set(sim) - known_sim)}")
    field_names = ("frequency_ghz", "true_snr_db", "duty_cycle", "mean_hold_slots", "noise_power")
    channels = []
    for name in cp.sections():
        if name == "simulation":
            continue
        if not (name == "channel" or name.startswith("channel.")):
            raise ParameterError(f"unexpected section [{name}]")
        sec = cp[name]
        unknown = set(sec) - set(field_names)
        if unknown:
            raise ParameterError(f"[{name}]: unknown keys {sorted(unknown)}")
        try:
            kwargs = {k: float(sec[k]) for k in field_names if k in sec}
        except ValueError as exc:
            raise ParameterError(f"[{name}]: {exc}") from None
        missing = {"frequency_ghz", "true_snr_db", "duty_cycle"} - set(kwargs)
        if missing:
            raise ParameterError(f"[{name}]: missing keys {sorted(missing)}")
        channels.append(SimChannelConfig(**kwargs))
    if not channels:
        raise EmptyInputError("scenario defines no channels")
    try:
        return Scenario(
            channels=tuple(channels),
            n_slots=int(sim.get("n_slots", 10_000)),
            samples_per_slot=int(sim.get("samples_per_slot", 100)),
            target_pfa=float(sim.get("target_pfa", 0.01)),
        )
    except ValueError as exc:
        raise ParameterError(f"[simulation]: {exc}") from None


def channel_seeds(seed: int, n: int) -> list[int]:
    """Independent per-channel seeds derived from one base seed."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def run_scenario(scenario: Scenario, seed: int) -> list[ChannelObservation]:
    seeds = channel_seeds(seed, len(scenario.channels))
    return [observe_channel(c, scenario.n_slots, scenario.samples_per_slot,
                            scenario.target_pfa, s)
            for c, s in zip(scenario.channels, seeds)]
