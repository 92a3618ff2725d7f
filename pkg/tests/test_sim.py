import numpy as np
import pytest
from scipy.stats import chi2

from chanrank.errors import DomainError, EmptyInputError, ParameterError
from chanrank.sim import (SimChannelConfig, channel_seeds, energy_detect,
                          estimate_occupancy_frequentist, measure_energy, observe_channel,
                          parse_scenario, run_scenario, simulate_trace,
                          threshold_for_false_alarm)

SEED = 20240611


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        {"duty_cycle": 0.0}, {"duty_cycle": 1.0}, {"mean_hold_slots": 0.5},
        {"noise_power": 0.0}, {"frequency_ghz": -1.0},
    ])
    def test_invalid(self, kwargs):
        base = dict(frequency_ghz=2.4, true_snr_db=10.0, duty_cycle=0.3)
        with pytest.raises(ParameterError):
            SimChannelConfig(**{**base, **kwargs})

    @pytest.mark.parametrize("duty", [0.01, 0.3, 0.5, 0.8, 0.99])
    def test_stationary_probability(self, duty):
        c = SimChannelConfig(2.4, 10.0, duty, mean_hold_slots=4)
        p_off, p_on = c.transition_probs
        assert p_on / (p_on + p_off) == pytest.approx(duty, rel=1e-12)
        assert min(c.mean_on_slots, c.mean_off_slots) == 4


class TestSimulateTrace:
    def test_single_slot(self):
        t = simulate_trace(SimChannelConfig(2.4, 10, 0.3), 1, 10, SEED)
        assert len(t) == 1 and len(t.slots) == 1

    def test_deterministic(self):
        c = SimChannelConfig(2.4, 10, 0.3)
        assert simulate_trace(c, 500, 20, SEED).identical_to(simulate_trace(c, 500, 20, SEED))
        assert not simulate_trace(c, 500, 20, SEED).identical_to(simulate_trace(c, 500, 20, SEED + 1))

    def test_duty_cycle(self):
        t = simulate_trace(SimChannelConfig(2.4, 10, 0.3, mean_hold_slots=5), 10_000, 10, 0)
        assert 0.28 <= t.states.mean() <= 0.32

    def test_mean_sojourn(self):
        c = SimChannelConfig(2.4, 10, 0.2, mean_hold_slots=6)
        s = simulate_trace(c, 100_000, 1, SEED).states.astype(int)
        edges = np.flatnonzero(np.diff(s)) + 1
        runs = np.diff(np.concatenate([[0], edges, [len(s)]]))
        starts = s[np.concatenate([[0], edges])]
        on_runs = runs[1:-1][starts[1:-1] == 1]
        off_runs = runs[1:-1][starts[1:-1] == 0]
        assert on_runs.mean() == pytest.approx(6.0, rel=0.05)
        assert off_runs.mean() == pytest.approx(24.0, rel=0.05)

    def test_decisions_consistent_with_threshold(self):
        t = simulate_trace(SimChannelConfig(2.4, 0, 0.5), 2000, 10, SEED, target_pfa=0.1)
        assert np.all(t.energies >= 0)
        np.testing.assert_array_equal(t.decisions, t.energies > t.threshold)
        assert all(energy_detect(s.measured_energy, t.threshold) == s.busy for s in t.slots)

    def test_bad_slots(self):
        with pytest.raises(ParameterError):
            simulate_trace(SimChannelConfig(2.4, 10, 0.3), 0, 10, SEED)


class TestEnergyDetect:
    def test_cases(self):
        assert energy_detect(2.0, 1.5) is True
        assert energy_detect(1.0, 1.5) is False
        assert energy_detect(1.5, 1.5) is False

    def test_negative_energy(self):
        with pytest.raises(DomainError):
            energy_detect(-0.1, 1.5)


class TestThreshold:
    def test_median_single_sample(self):
        assert threshold_for_false_alarm(0.5, 1, 1.0) == pytest.approx(0.4549364231195728, rel=1e-9)

    @pytest.mark.parametrize("pfa,n,noise", [(0.1, 100, 1.0), (0.01, 10, 2.5), (1e-4, 1000, 0.5)])
    def test_matches_closed_form_inverse(self, pfa, n, noise):
        expected = noise * chi2.isf(pfa, n) / n
        assert threshold_for_false_alarm(pfa, n, noise) == pytest.approx(expected, rel=1e-9)

    def test_monotone_in_pfa(self):
        assert threshold_for_false_alarm(0.01, 100) > threshold_for_false_alarm(0.1, 100)

    def test_monte_carlo(self):
        thr = threshold_for_false_alarm(0.1, 100, 1.0)
        e = measure_energy(np.zeros(100_000, bool), 100, 0.0, 1.0, np.random.default_rng(SEED))
        assert 0.09 <= np.mean(e > thr) <= 0.11

    @pytest.mark.parametrize("pfa", [0.0, 1.0, -0.5, 1.5])
    def test_domain(self, pfa):
        with pytest.raises(DomainError):
            threshold_for_false_alarm(pfa, 10)


class TestOccupancyEstimate:
    def test_arithmetic(self):
        assert estimate_occupancy_frequentist([True, False, True, True]) == 0.75
        assert estimate_occupancy_frequentist([False] * 5) == 0.0

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            estimate_occupancy_frequentist([])

    def test_matches_independent_count(self):
        t = simulate_trace(SimChannelConfig(2.4, 3, 0.4), 5000, 10, SEED)
        busy = sum(1 for s in t.slots if s.busy)
        assert estimate_occupancy_frequentist(t) == busy / len(t.slots)

    def test_false_alarm_inflation(self):
        t = simulate_trace(SimChannelConfig(2.4, 15, 0.4), 10_000, 100, 5, target_pfa=0.05)
        assert 0.38 <= estimate_occupancy_frequentist(t) <= 0.45


class TestObserveChannel:
    def test_idle_high_snr_channel(self):
        o = observe_channel(SimChannelConfig(2.462, 12, 0.01), 10_000, 100, 0.01, 42)
        assert (o.frequency_ghz, o.snr_db) == (2.462, 12.0)
        # expected occupancy ~ duty + (1 - duty) * pfa = 0.0199
        assert 0.01 <= o.occupancy <= 0.03

    def test_near_idle(self):
        o = observe_channel(SimChannelConfig(2.462, 12, 0.001), 10_000, 100, 0.01, 42)
        assert o.occupancy <= 0.03

    def test_deterministic(self):
        c = SimChannelConfig(5.765, -3, 0.2)
        assert observe_channel(c, 2000, 50, 0.05, 7) == observe_channel(c, 2000, 50, 0.05, 7)


SCENARIO = """
[simulation]
n_slots = 2000
samples_per_slot = 50
target_pfa = 0.01

[channel.a]
frequency_ghz = 2.462
true_snr_db = 12
duty_cycle = 0.05

[channel.b]
frequency_ghz = 5.765
true_snr_db = -5
duty_cycle = 0.4
mean_hold_slots = 3
noise_power = 2.0
"""


class TestScenario:
    def test_parse(self):
        s = parse_scenario(SCENARIO)
        assert (s.n_slots, s.samples_per_slot, s.target_pfa) == (2000, 50, 0.01)
        assert [c.frequency_ghz for c in s.channels] == [2.462, 5.765]
        assert s.channels[1].noise_power == 2.0

    def test_run_deterministic(self):
        s = parse_scenario(SCENARIO)
        assert run_scenario(s, 3) == run_scenario(s, 3)
        assert len(set(channel_seeds(3, 5))) == 5

    @pytest.mark.parametrize("text", [
        "[simulation]\nn_slots = 10\n",
        "[channel.a]\nfrequency_ghz = 1\n",
        "[channel.a]\nfrequency_ghz = 1\ntrue_snr_db = 2\nduty_cycle = 0.5\ncolour = red\n",
        "[other]\nx = 1\n",
        "not ini",
    ])
    def test_invalid(self, text):
        with pytest.raises((ParameterError, EmptyInputError)):
            parse_scenario(text)
