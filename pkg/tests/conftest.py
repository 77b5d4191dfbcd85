import math

import numpy as np
import pytest

from sgdecoherence import CODATA, ExperimentParams


@pytest.fixture
def paper_params():
    """Yb microcrystal: 1e-14 kg split over 250 um."""
    return ExperimentParams(mass=1e-14, separation=250e-6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


def duration_for_phase(T, mass=1e-14, separation=250e-6, constants=CODATA):
    """Duration that makes the dimensionless phase equal ``T``."""
    return T * constants.hbar * separation / (constants.G * mass**2)


HALF_PI = math.pi / 2


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
