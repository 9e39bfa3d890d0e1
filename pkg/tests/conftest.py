import pytest
from hypothesis import settings

from helpers import RUNNING, T

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


@pytest.fixture
def running_term():
    return T(RUNNING)
