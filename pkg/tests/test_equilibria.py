import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from signalpower.equilibria import (
    UnsupportedGameError,
    enumerate_equilibria,
    poa_max,
    price_of_anarchy,
    worst_equilibrium_welfare,
)
from signalpower.game import FiniteBayesianGame, state_game
from signalpower.scenarios import build

from conftest import random_game


def deviation_gain(g, x):
    """Largest gain any player gets from a pure deviation (brute force)."""
    u = g.payoff[0].astype(float)
    if not g.sense.maximize:
        u = -u
    n = g.n_players
    strat = [np.asarray(s, dtype=float) for s in x.strategies]
    worst = 0.0
    for i in range(n):
        cur = 0.0
        dev = np.zeros(g.action_counts[i])
        for prof in itertools.product(*[range(k) for k in g.action_counts]):
            w_others = np.prod([strat[j][prof[j]] for j in range(n) if j != i])
            cur += strat[i][prof[i]] * w_others * u[prof][i]
            dev[prof[i]] += w_others * u[prof][i]
        worst = max(worst, dev.max() - cur)
    return worst


def restricted(g, keep):
    sub = g.payoff[0][np.ix_(keep, keep)]
    acts = tuple(tuple(g.actions[i][k] for k in keep) for i in range(2))
    return FiniteBayesianGame(("s",), [1.0], acts, sub[np.newaxis], g.sense)


def test_matching_pennies():
    pay = np.array([[[1, 0], [0, 1]], [[0, 1], [1, 0]]], dtype=float)
    g = FiniteBayesianGame.from_arrays(pay[np.newaxis])
    eq = enumerate_equilibria(g)
    assert len(eq) == 1
    np.testing.assert_allclose(eq.profiles[0].strategies[0], [0.5, 0.5])
    np.testing.assert_allclose(eq.profiles[0].strategies[1], [0.5, 0.5])


@pytest.mark.parametrize("a,e", [(0.5, 0.1), (0.9, 0.2)])
def test_fig4_restricted_three_equilibria(a, e):
    g = restricted(state_game(build("fig4", alpha=a, eps=e).instance, 0), [1, 2])
    eq = enumerate_equilibria(g)
    assert len(eq) == 3
    pure = sorted(p.as_pure() for p in eq if p.is_pure())
    assert pure == [(0, 1), (1, 0)]  # (C, S2) and (S2, C)
    mixed = [p for p in eq if not p.is_pure()][0]
    assert mixed.strategies[0][0] == pytest.approx(1 / (1 + e), abs=1e-8)
    assert mixed.strategies[1][0] == pytest.approx(a / (a + e), abs=1e-8)


def test_sec51_theta1_unique_AA():
    g = state_game(build("sec51", alpha=2, eps=0.1).instance, 0)
    eq = enumerate_equilibria(g)
    assert [p.as_pure() for p in eq] == [(0, 0)]


def test_worst_welfare_fig4():
    a, e = 0.5, 0.1
    g = state_game(build("fig4", alpha=a, eps=e).instance, 0)
    val, x = worst_equilibrium_welfare(g)
    assert val == pytest.approx(a + (a + e) / (1 + e), abs=1e-9)
    assert deviation_gain(g, x) <= 1e-8


def test_worst_welfare_fig5():
    a, e = 0.5, 0.1
    g = state_game(build("fig5", alpha=a, eps=e).instance, 0)
    assert worst_equilibrium_welfare(g)[0] == pytest.approx(2 * a + e, abs=1e-9)


def test_worst_welfare_one_player():
    g = FiniteBayesianGame.from_arrays([[[0.3], [0.9], [0.1]]])
    val, x = worst_equilibrium_welfare(g)
    assert val == pytest.approx(0.9)
    assert x.as_pure() == (1,)


def test_poa_fig4():
    a, e = 0.5, 0.1
    rep = price_of_anarchy(state_game(build("fig4", alpha=a, eps=e).instance, 0))
    # independent closed form of the worst/opt ratio
    assert rep.ratio == pytest.approx((a + (a + e) / (1 + e)) / (1 + a + e), abs=1e-9)
    assert rep.ratio == pytest.approx(1.15 / 1.76, abs=1e-9)


def test_poa_sec51_and_fig5():
    assert price_of_anarchy(state_game(build("sec51", alpha=2, eps=0.1).instance, 0)).ratio == pytest.approx(2.1 / 3)
    assert price_of_anarchy(state_game(build("fig5", alpha=0.5, eps=0.1).instance, 0)).ratio == pytest.approx(1.1 / 1.5)


def test_poa_conventions():
    # prisoner's-dilemma-like cost game: finite ratio above 1
    pd = FiniteBayesianGame.from_arrays(np.array([[[[3, 3], [2, 0]], [[0, 2], [1, 1]]]], dtype=float), sense="cost")
    rep = price_of_anarchy(pd)
    assert rep.flag == "finite" and rep.ratio >= 1
    # worst equilibrium and optimum both cost 0
    zero = FiniteBayesianGame.from_arrays(np.array([[[[0, 0], [0, 0]], [[0, 0], [1, 1]]]], dtype=float), sense="cost")
    rep = price_of_anarchy(zero)
    assert rep.flag == "one-by-convention" and rep.ratio == 1
    # (A, A) costs 0 but (B, B), costing 4, is also an equilibrium
    trap = FiniteBayesianGame.from_arrays(np.array([[[[0, 0], [5, 0]], [[0, 5], [2, 2]]]], dtype=float), sense="cost")
    rep = price_of_anarchy(trap)
    assert rep.flag == "infinite" and rep.ratio == float("inf")


def test_poa_max_fig4_symmetric_states():
    g = build("fig4", alpha=0.5, eps=0.1).instance
    r0 = price_of_anarchy(state_game(g, 0)).ratio
    r1 = price_of_anarchy(state_game(g, 1)).ratio
    assert r0 == pytest.approx(r1, abs=1e-9)
    assert poa_max(g) == pytest.approx(r0, abs=1e-9)


def test_poa_max_single_state_and_sec51():
    g = random_game(11, states=1)
    assert poa_max(g) == price_of_anarchy(g).ratio
    assert poa_max(build("sec51", alpha=2, eps=0.1).instance) == pytest.approx(0.7)


def test_unsupported_sizes():
    with pytest.raises(UnsupportedGameError):
        enumerate_equilibria(random_game(1, players=3, states=1, actions=2))
    with pytest.raises(UnsupportedGameError):
        enumerate_equilibria(random_game(1, players=2, states=1, actions=7))


def test_three_player_pure_mode():
    g = random_game(5, players=3, states=1, actions=2)
    eq = enumerate_equilibria(g, pure_only=True)
    for p in eq:
        assert deviation_gain(g, p) <= 1e-8


def test_degenerate_game_flagged():
    # every profile pays the same: a whole continuum of equilibria
    g = FiniteBayesianGame.from_arrays(np.ones((1, 2, 2, 2)))
    eq = enumerate_equilibria(g)
    assert eq.degenerate and eq.perturbed
    assert len(eq) >= 1
    for p in eq:
        assert deviation_gain(g, p) <= 1e-8


@given(st.integers(0, 10_000), st.integers(2, 4), st.integers(2, 4), st.sampled_from(["cost", "payoff"]))
def test_random_equilibria_verified_and_odd(seed, m, n, sense):
    g = random_game(seed, states=1, actions=(m, n), sense=sense)
    eq = enumerate_equilibria(g)
    for p in eq:
        assert deviation_gain(g, p) <= 1e-8
    if not eq.degenerate:
        assert len(eq) % 2 == 1


@given(st.integers(0, 10_000), st.sampled_from(["cost", "payoff"]))
def test_poa_one_when_worst_equilibrium_is_optimal(seed, sense):
    # identical-interest game with a dominant optimal profile
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.1, 1.0, size=(3, 3))
    best = (0, 0)
    w[best] = 2.0 if sense == "payoff" else 0.01
    if sense == "payoff":
        w[0, :] = np.maximum(w[0, :], w.max(axis=0) + 0.01)
        w[:, 0] = np.maximum(w[:, 0], w.max(axis=1) + 0.01)
        w[best] = w.max() + 1
    else:
        w[0, :] = np.minimum(w[0, :], w.min(axis=0) / 2)
        w[:, 0] = np.minimum(w[:, 0], w.min(axis=1) / 2)
        w[best] = w.min() / 2
    pay = np.stack([w, w], axis=-1)[np.newaxis]
    g = FiniteBayesianGame.from_arrays(pay, sense=sense)
    assert price_of_anarchy(g).ratio == pytest.approx(1.0, abs=1e-9)


@given(st.integers(0, 10_000), st.sampled_from(["cost", "payoff"]))
def test_poa_report_range(seed, sense):
    g = random_game(seed, states=1, sense=sense)
    rep = price_of_anarchy(g)
    if sense == "cost":
        assert rep.ratio >= 1 - 1e-9
    else:
        assert -1e-9 <= rep.ratio <= 1 + 1e-9
