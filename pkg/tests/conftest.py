import pytest
from hypothesis import HealthCheck, settings

from relflow.subnet import build_subnetwork

import helpers

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def toy7():
    return helpers.toy7_graph()


@pytest.fixture(scope="session")
def toy7_net(toy7):
    return build_subnetwork(toy7, helpers.TOY7_KEYWORD)
