import os

import pytest
from hypothesis import HealthCheck, settings

from transcend.specfile import SHIPPED, data_path, load_spec

settings.register_profile("ci", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture(scope="session")
def shipped():
    return {name: load_spec(data_path(name)) for name in SHIPPED}


@pytest.fixture(scope="session")
def exp_spec(shipped):
    return shipped["exp"]


@pytest.fixture(scope="session")
def cossin(shipped):
    return shipped["cossin"]


@pytest.fixture(scope="session")
def fredholm(shipped):
    return shipped["fredholm"]


@pytest.fixture(scope="session")
def thue_morse(shipped):
    return shipped["thue_morse"]
