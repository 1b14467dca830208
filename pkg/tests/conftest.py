import pytest
from hypothesis import HealthCheck, settings

from src.config import Caps

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def caps():
    return Caps()


@pytest.fixture
def tight_caps():
    return Caps(fiber_cap=50, box_cap=50, level_cap=1, truncation_cap=2)
