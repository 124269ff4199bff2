import numpy as np
import pytest
from hypothesis import settings

from fsoqkd.security import SecurityParams
from fsoqkd.signal import build_constellation, nu_for_entropy

settings.register_profile("fsoqkd", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("fsoqkd")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def ps256():
    return build_constellation(256, nu_for_entropy(256, 6.0), 8.0)


@pytest.fixture
def point_params():
    return SecurityParams(worst_case=False)
