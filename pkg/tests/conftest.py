import math

import numpy as np
import pytest

from onionpeel.instance import MetricKind, TspInstance, load_dantzig42, load_dantzig42_opt_tour

ACCEPTANCE_LINES: list[str] = []


def euclid(coords, name="fixture"):
    coords = np.asarray(coords, dtype=float)
    return TspInstance(name, len(coords), MetricKind.RAW_EUC, coords=coords)


UNIT_SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


@pytest.fixture
def square():
    return euclid(UNIT_SQUARE, "square")


@pytest.fixture(scope="session")
def dantzig():
    return load_dantzig42()


@pytest.fixture(scope="session")
def dantzig_opt(dantzig):
    return load_dantzig42_opt_tour(dantzig)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
