import numpy as np
import pytest

from spinlogic.dynamics import default_system
from spinlogic.seqlang import fixture_path, parse_file


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def cnot_v1():
    return parse_file(fixture_path("cnot_v1.pseq"))


@pytest.fixture(scope="session")
def cnot_v2():
    return parse_file(fixture_path("cnot_v2.pseq"))


@pytest.fixture
def two_spin():
    return default_system()
