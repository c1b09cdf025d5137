import numpy as np
import pytest

from qssl import CostLedger, EstimationParams


@pytest.fixture
def ledger():
    return CostLedger()


@pytest.fixture
def exact_params():
    return EstimationParams(epsilon=0.01, delta=0.01, mode="exact")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))
