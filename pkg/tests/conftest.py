import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from curvosc import ModelParams, QuantumParams

settings.register_profile("default", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def hyperbolic():
    """lam = 1, alpha = 3: potential minimum 2.5 at r = sqrt(0.5), threshold 4.5."""
    return ModelParams(1.0, 3.0)


@pytest.fixture
def spherical():
    """lam = -1, alpha = 2: domain r < 1, potential minimum 2.5 at r = 1/sqrt(3)."""
    return ModelParams(-1.0, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[(-1.0, 1.0), (1.0, 5.2)], ids=["sphere", "hyperbolic"])
def quantum_params(request):
    return QuantumParams(*request.param)


SQRT3 = math.sqrt(3.0)
SQRT10 = math.sqrt(10.0)
