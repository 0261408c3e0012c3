import numpy as np
import pytest

from netcap.graph import Network


@pytest.fixture
def path3():
    return Network(3, [(0, 1), (1, 2)])


@pytest.fixture
def path4():
    return Network(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star5():
    return Network(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def cycle4():
    return Network(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def triangle():
    return Network(3, [(0, 1), (0, 2), (1, 2)])


def uniform(net, value=1.0):
    return np.full(net.edge_count, value)
