import random

import pytest

from nodal_kit.rings import DualNumbers, LocalTruncation, PrimeField, Rationals


@pytest.fixture
def rng():
    return random.Random(90125)


@pytest.fixture
def QQ():
    return Rationals()


@pytest.fixture
def F5():
    return PrimeField(5)


@pytest.fixture
def F7():
    return PrimeField(7)


@pytest.fixture
def DQ():
    return DualNumbers(Rationals())


@pytest.fixture
def LOC():
    return LocalTruncation(Rationals(), ("s", "t"), 3)


def random_unit_disc(ring, rng):
    """A (gamma, delta) pair whose discriminant is a unit."""
    while True:
        g = ring.random_element(rng)
        d = ring.random_element(rng)
        if (g * g - 4 * d).is_unit:
            return g, d
