import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("lab", max_examples=25, deadline=None)
settings.load_profile("lab")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def cnormal(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)
