import numpy as np
import pytest

from cpflow import verify as vf


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def plastic_state(rng):
    """One well-conditioned state beyond the yield surface."""
    from cpflow import MaterialParams

    params = MaterialParams()
    F, C, Cp = vf.random_plastic_state(rng, params)
    return params, F, C, Cp
