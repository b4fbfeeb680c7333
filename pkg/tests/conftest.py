import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from projclust.config import TestingConfig
from projclust.models import PointSet


@pytest.fixture(scope='session', autouse=True)
def testing_runtime():
    TestingConfig.init_app()
    yield TestingConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def random_points(rng):
    def make(n, m, scale=1.0):
        return PointSet(rng.uniform(-scale, scale, size=(n, m)))
    return make


def point_sets(max_n=8, max_m=4, min_n=1):
    """Hypothesis strategy: small point sets with coordinates in [-5, 5]"""
    coords = st.floats(min_value=-5, max_value=5, allow_nan=False, allow_infinity=False, width=64)
    shapes = st.tuples(st.integers(min_n, max_n), st.integers(1, max_m))
    return shapes.flatmap(lambda shape: arrays(np.float64, shape, elements=coords)).map(PointSet)
