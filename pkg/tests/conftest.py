import math

import numpy as np
import pytest

from fdband.basis import FourierBasis
from fdband.ingest import SyntheticConfig, synthesize_ensemble

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_coeffs(rng, p, level=10.0, scale=2.0):
    c = rng.uniform(-scale, scale, p)
    c[0] = level
    return c


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def basis21():
    return FourierBasis(21)


@pytest.fixture
def seaice_truth():
    w = 2 * math.pi / 365
    c = np.zeros(7)
    c[0] = 11.5
    c[1] = 4.6 * math.sin(w * 66)
    c[2] = 4.6 * math.cos(w * 66)
    c[3] = 0.3
    return c


@pytest.fixture
def small_dataset(seaice_truth):
    cfg = SyntheticConfig(seaice_truth, offsets=np.linspace(0.5, -0.5, 12), noise_sd=0.1, seed=3)
    return synthesize_ensemble(cfg)
