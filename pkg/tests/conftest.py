from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F = Fraction


@pytest.fixture
def unit_square():
    from mivolume.polytope import Polytope

    return Polytope.box([0, 0], [1, 1])
