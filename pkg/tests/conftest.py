import numpy as np
import pytest

from cmclab import GridSpec


@pytest.fixture(scope="session")
def grid8():
    return GridSpec.cubic(8)


@pytest.fixture(scope="session")
def grid16():
    return GridSpec.cubic(16)


@pytest.fixture()
def rng():
    # fresh but fixed stream per test
    return np.random.default_rng(2024)
