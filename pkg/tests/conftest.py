import pytest
from hypothesis import HealthCheck, settings

import support

settings.register_profile("default", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def example_cnf():
    return support.example_cnf()


@pytest.fixture
def example_steps():
    return support.example_steps()


@pytest.fixture
def example_graph():
    return support.example_graph()


@pytest.fixture
def example_pog():
    return support.example_pog()
