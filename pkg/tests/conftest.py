from fractions import Fraction

import pytest

from riskcomb import FiniteProbSpace


@pytest.fixture
def space():
    return FiniteProbSpace.uniform(4)


@pytest.fixture
def exact_space():
    return FiniteProbSpace.uniform(4, exact=True)


@pytest.fixture
def X(space):
    return space.position([-10, -5, 0, 5])


@pytest.fixture
def q2(space):
    return space.scenario([0.4, 0.3, 0.2, 0.1])


@pytest.fixture
def q2_exact(exact_space):
    return exact_space.scenario([Fraction(4, 10), Fraction(3, 10), Fraction(2, 10), Fraction(1, 10)])
