from pathlib import Path

import pytest

from chanrank.ces import ChannelObservation

DATA = Path(__file__).parent / "data"

# Field measurements in their expected utility-rank order: (frequency GHz, SNR dB, occupancy %).
RANKED = [
    (2.462, 12, 1), (2.437, 19, 6), (2.437, 8, 1), (5.765, 11, 9), (5.765, 17, 12),
    (2.462, 8, 6), (1.88, 17, 14), (2.462, 18, 15), (1.88, 17, 15), (2.412, 13, 16),
    (5.765, 12, 16), (1.88, 7, 13), (2.462, 19, 24), (2.412, 8, 28), (2.437, 5, 24),
    (1.88, -1, 11), (2.437, -2, 10), (1.88, -2, 10),
]

# Measurements sorted by occupancy, each with its expected utility rank.
BY_OCCUPANCY = [
    (2.437, 8, 1, 3), (2.462, 12, 1, 1), (5.765, -17, 1, 27), (5.765, -12, 5, 24),
    (2.437, 19, 6, 2), (2.462, 8, 6, 6), (5.765, 11, 9, 4), (2.412, -18, 10, 34),
    (2.437, -2, 10, 17), (2.462, -6, 10, 22), (1.88, -2, 10, 18), (1.88, -1, 11, 16),
    (5.765, 17, 12, 5), (1.88, -9, 12, 25), (1.88, 7, 13, 12), (1.88, 17, 14, 7),
    (2.437, -17, 15, 37), (2.462, 18, 15, 8), (1.88, 17, 15, 9),
]

_RANKED_KEYS = set(RANKED)
OCCUPANCY_ONLY_ROWS = [r[:3] for r in BY_OCCUPANCY if r[:3] not in _RANKED_KEYS]
UNION = RANKED + OCCUPANCY_ONLY_ROWS


def as_observations(rows):
    return [ChannelObservation.from_percent(*r[:3]) for r in rows]


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def union_observations():
    return as_observations(UNION)


@pytest.fixture
def ranked_reference():
    return [(i, i + 1) for i in range(len(RANKED))]


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
