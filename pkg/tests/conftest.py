import numpy as np
import pytest

from zeemanzones.params import MagneticParams


@pytest.fixture(scope="session")
def p2():
    return MagneticParams.make([(1.0, 2)])


@pytest.fixture(scope="session")
def p2b():
    return MagneticParams.make([(2.0, 2)])


@pytest.fixture(scope="session")
def p4():
    return MagneticParams.make([(1.0, 2), (2.0, 2)])


@pytest.fixture(scope="session")
def xy2():
    return np.array([0.3, -0.2]), np.array([0.1, 0.4])


@pytest.fixture(scope="session")
def xy4():
    return np.array([0.3, -0.2, 0.1, 0.2]), np.array([0.1, 0.4, -0.3, 0.05])
