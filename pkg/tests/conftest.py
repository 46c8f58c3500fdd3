import pytest

from ottokiln import BathSpec, FockDistribution, InitialStateSpec, make_distribution


@pytest.fixture
def ground_50():
    return make_distribution(InitialStateSpec.ground(), 50)


@pytest.fixture
def hot_bath():
    return BathSpec(temperature=1.2, gamma0=0.5)


@pytest.fixture
def cold_bath():
    return BathSpec(temperature=0.4, gamma0=0.5)


def random_distribution(rng, n_levels):
    probs = rng.random(n_levels)
    probs /= probs.sum()
    return FockDistribution(probs)
