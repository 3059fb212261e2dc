import math

import pytest

from lambda_jcm import ModelParams, Motion, coherent_amplitudes


@pytest.fixture(scope="session")
def params4():
    """Moving atom, coherent field with mean photon number 4."""
    return ModelParams(alpha=2.0, p=1, motion=Motion.MOVING)


@pytest.fixture(scope="session")
def q4(params4):
    return coherent_amplitudes(params4.alpha, params4.n_max)


@pytest.fixture(scope="session")
def params10():
    """Default-like run: mean photon number 10."""
    return ModelParams(alpha=math.sqrt(10.0), p=1, motion=Motion.MOVING)


@pytest.fixture(scope="session")
def q10(params10):
    return coherent_amplitudes(params10.alpha, params10.n_max)
