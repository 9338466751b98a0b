import math

import pytest
from hypothesis import settings

from limitlab import Distribution, make_smoother

settings.register_profile("limitlab", max_examples=40, deadline=None)
settings.load_profile("limitlab")

R3 = math.sqrt(3.0)


@pytest.fixture
def rad():
    return Distribution.rademacher()


@pytest.fixture
def unif():
    return Distribution.uniform(-R3, R3, label="uniform:-sqrt(3),sqrt(3)")


@pytest.fixture
def k31():
    return make_smoother(1.0, 3)


@pytest.fixture
def k21():
    return make_smoother(1.0, 2)
