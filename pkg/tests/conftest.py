import numpy as np
import pytest
from hypothesis import settings

from minregion import ProblemInstance

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

S1, S2, L = 1.5, 1.0, 10.0


def reference_config(r, n=2):
    return ProblemInstance.canonical(r, S1, S2, L, n)


@pytest.fixture
def two_cusps():
    return reference_config(2.0)


@pytest.fixture
def one_cusp():
    return reference_config(4.0)


@pytest.fixture
def three_arcs():
    return reference_config(6.0)


@pytest.fixture
def singleton():
    return reference_config(25.0 / 3.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
