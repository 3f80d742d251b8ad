from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("tiler", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("tiler")

F = Fraction


@pytest.fixture
def c12():
    from tiler import graph

    return graph.cycle(12)
