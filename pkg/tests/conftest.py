import random

import pytest


@pytest.fixture
def rng():
    """Deterministic RNG so failures reproduce exactly."""
    return random.Random(0x5EED5)
