import numpy as np
import pytest

from ptwell import WellParameters

# the seven canonical parameter regimes (a, omega, eta)
REGIMES = {
    1: (0.95, 1.5, 20.0),
    2: (0.95, 15000.0, 20.0),
    3: (0.85, 15000.0, 20.0),
    4: (0.65, 15000.0, 20.0),
    5: (0.65, 150.0, 20.0),
    6: (0.35, 15000.0, 20.0),
    7: (0.35, 150.0, 20.0),
}


@pytest.fixture
def bare_box():
    return WellParameters(a=0.5, omega=0.0, eta=0.0)


@pytest.fixture
def fig1():
    return WellParameters(*REGIMES[1])


@pytest.fixture
def fig5():
    return WellParameters(*REGIMES[5])


@pytest.fixture
def fig6():
    return WellParameters(*REGIMES[6])


def params(fig: int) -> WellParameters:
    return WellParameters(*REGIMES[fig])


def local_maxima(x: np.ndarray, y: np.ndarray):
    """Plain three-point maxima of a sampled curve (test-side utility)."""
    idx = np.where((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1
    return x[idx], y[idx]
