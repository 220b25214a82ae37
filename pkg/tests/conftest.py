import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from signalpower.game import FiniteBayesianGame

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def random_game(seed, players=2, states=2, actions=3, sense="payoff"):
    rng = np.random.default_rng(seed)
    counts = (actions,) * players if isinstance(actions, int) else tuple(actions)
    payoff = rng.uniform(0.0, 1.0, size=(states,) + counts + (players,))
    prior = rng.dirichlet(np.ones(states))
    return FiniteBayesianGame.from_arrays(payoff, prior, sense)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
