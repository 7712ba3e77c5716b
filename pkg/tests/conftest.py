import random

import pytest
from hypothesis import HealthCheck, settings

from gag.field import GF

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SMALL_QS = (2, 3, 4, 5)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(params=SMALL_QS, ids=lambda q: f"q{q}")
def small_field(request):
    return GF(request.param)
