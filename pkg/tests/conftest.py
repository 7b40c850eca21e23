import numpy as np
import pytest

from hyperres.potentials import step_potential


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260808)


@pytest.fixture(scope="session")
def pot_n2_c1():
    return step_potential(2, 1.0, 1.0)


@pytest.fixture(scope="session")
def pot_n1_c1():
    return step_potential(1, 1.0, 1.0)


@pytest.fixture(scope="session")
def pot_n2_ci():
    return step_potential(2, 1j, 1.0)
