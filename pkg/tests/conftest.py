import pytest
from hypothesis import settings

from zinbiel.catalog import build

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def z1_8():
    return build("Z1", 8)


@pytest.fixture(scope="session")
def z21_8():
    return build("Z21", 8)
