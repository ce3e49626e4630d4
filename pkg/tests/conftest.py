import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from idcep import SamplerConfig, ScenarioSpec, fit, simulate_trial


@pytest.fixture(scope="session")
def scenario2_data():
    return simulate_trial(ScenarioSpec(scenario_id=2, n=600, seed=11))


@pytest.fixture(scope="session")
def scenario2_fit(scenario2_data):
    """One full default-settings fit, shared across tests that inspect chains."""
    return fit(scenario2_data, SamplerConfig(seed=5))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
