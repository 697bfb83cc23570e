import numpy as np
import pytest

from _support import PENTAGON, SQUARE


@pytest.fixture
def square():
    return SQUARE


@pytest.fixture
def pentagon():
    return PENTAGON


@pytest.fixture
def triangle():
    from spectral_dn.geometry import build_polygon

    return build_polygon([0, 1, 1j])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
