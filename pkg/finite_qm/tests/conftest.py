"""
Shared test setup: import path, hypothesis profiles and lattice fixtures.
"""

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

# Add module root to path so tests can import `src.*`
sys.path.insert(0, str(Path(__file__).parent.parent))

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", deadline=None, max_examples=50)
settings.load_profile("ci")


@pytest.fixture
def torus_spectrum():
    """The (0, 4, 9) spectrum: p = (0, 4, 9), N = 36."""
    from src.spectrum import EnergySpectrum, reduce
    return reduce(EnergySpectrum.from_values([0, 4, 9]))


@pytest.fixture
def uniform_torus_state(torus_spectrum):
    from src.quantum_state import DiscreteState, IntegerAmplitudes
    return DiscreteState(IntegerAmplitudes.from_ints([1, 1, 1]), torus_spectrum, 0)


@pytest.fixture(autouse=True)
def _fresh_config_cache():
    from src.config_loader import clear_cache
    clear_cache()
    yield
    clear_cache()
