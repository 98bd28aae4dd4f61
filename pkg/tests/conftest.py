import numpy as np
import pytest

from pacgeom import zoo


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(42)


def entry(entry_id):
    return zoo.get_entry(entry_id)


@pytest.fixture(scope="session")
def flat():
    return entry("flat-pac")


@pytest.fixture(scope="session")
def heis():
    return entry("heis-para")


@pytest.fixture(scope="session")
def heis_frame():
    return entry("heis-para-frame")


@pytest.fixture(scope="session")
def solv():
    return entry("solv-para")


@pytest.fixture(scope="session")
def sl2():
    return entry("sl2-para")


@pytest.fixture(scope="session")
def heis5():
    return entry("heis-para-5")


@pytest.fixture(scope="session")
def twisted():
    return entry("twisted-pac")
