import os

import numpy as np
import pytest

from src.models.model import PhaseMatchingShape, PumpEnvelope, PumpKind
from src.utils import jsa

SIGMA = 1e12
OMEGA_BAR = 1e15
GAMMA = 0.193
SCENARIOS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'scenarios')

@pytest.fixture
def scale() -> float:
    return jsa.design_point_scale(SIGMA, GAMMA)

@pytest.fixture
def pump() -> PumpEnvelope:
    return PumpEnvelope(PumpKind.PULSED, OMEGA_BAR, SIGMA)

@pytest.fixture
def gaussian_pm():
    return jsa.design_point_phase_matching(PhaseMatchingShape.GAUSSIAN, SIGMA, GAMMA)

@pytest.fixture
def sinc_pm():
    return jsa.design_point_phase_matching(PhaseMatchingShape.SINC, SIGMA, GAMMA)

@pytest.fixture
def jsa_grid(pump):
    return jsa.default_jsa_grid(pump, n_points=256)

@pytest.fixture
def f_gauss(gaussian_pm, pump, jsa_grid):
    return jsa.build_jsa(gaussian_pm, pump, jsa_grid, jsa_grid)

@pytest.fixture
def f_sinc(sinc_pm, pump, jsa_grid):
    return jsa.build_jsa(sinc_pm, pump, jsa_grid, jsa_grid)

@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)

@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for key in list(os.environ):
        if key.startswith('HOMDIP_'):
            monkeypatch.delenv(key)
