import pytest
from hypothesis import HealthCheck, settings

from contract_lab import Exponential, PointMass, Scenario, Uniform

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def uniform_scenario():
    return Scenario(1.0, 0.5, Uniform(0.5, 1.5), Uniform(0.0, 1.0))


@pytest.fixture(scope="session")
def fig6():
    return Scenario(1.0, 0.5, Exponential(0.5), Exponential(0.01))


@pytest.fixture(scope="session")
def anchored():
    return Scenario(1.0, 0.5, Exponential(0.2), PointMass(0.0))
