import os

import pytest
from hypothesis import HealthCheck, settings

from gwitt.group import named_group

settings.register_profile(
    "default",
    deadline=None,
    max_examples=int(os.environ.get("GWITT_EXAMPLES", "40")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def d6():
    return named_group("d6")


@pytest.fixture(scope="session")
def s3():
    return named_group("s3")


@pytest.fixture(scope="session")
def c2():
    return named_group("c2")
