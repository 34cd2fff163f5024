import numpy as np
import pytest

from affinedim.fixtures import hexagon_h, sixpoint_h


def random_gamma(rng, n):
    """Well-conditioned random centering vector: signed entries, sum 1.

    Entries stay O(1); normalizing by a near-zero sum would only manufacture
    cancellation noise unrelated to the properties under test.
    """
    while True:
        g = rng.uniform(-1.0, 2.0, n)
        if abs(g.sum()) >= max(1.0, n / 4):
            return g / g.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture
def hexagon():
    return hexagon_h()


@pytest.fixture
def sixpoint():
    return sixpoint_h()
