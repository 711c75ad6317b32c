import pytest

from aodvmc import load_scenario


@pytest.fixture(scope="session")
def paper1():
    return load_scenario("paper1")


@pytest.fixture(scope="session")
def paper2():
    return load_scenario("paper2")


@pytest.fixture(scope="session")
def paper3():
    return load_scenario("paper3")
