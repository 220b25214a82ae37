"""Nash equilibria of small complete-information games and the price of anarchy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from signalpower import _pykernels, kernels
from signalpower.game import (
    FiniteBayesianGame,
    MixedProfile,
    ObjectiveSense,
    expected_tensor,
    optimal_welfare,
    state_game,
    welfare,
)

BR_TOL = 1e-8  # best-response slack for accepting an equilibrium
DEGENERACY_TOL = 1e-9
PERTURBATION = 1e-9
MAX_ACTIONS_2P = 6


class UnsupportedGameError(ValueError):
    """The game is outside the sizes the enumerator handles."""


@dataclass(frozen=True, eq=False)
class EquilibriumSet:
    """Enumerated equilibria.

    ``degenerate`` marks a singular support system or a non-isolated
    equilibrium; the profiles are then those of a deterministically
    perturbed copy of the game (``perturbed=True``) and the listing may miss
    equilibria of the original game.
    """

    profiles: tuple
    degenerate: bool = False
    perturbed: bool = False

    def __len__(self) -> int:
        return len(self.profiles)

    def __iter__(self):
        return iter(self.profiles)


@dataclass(frozen=True, eq=False)
class PoAReport:
    worst_welfare: object
    optimal_welfare: object
    ratio: float
    equilibrium: MixedProfile
    optimal_profile: tuple
    flag: str = "finite"  # or "one-by-convention" / "infinite"
    degenerate: bool = False


def ratio_with_conventions(num, den):
    """``num/den`` with 0/0 -> 1 and x/0 -> inf; returns ``(ratio, flag)``."""
    if den == 0:
        if num == 0:
            return (Fraction(1) if isinstance(num, Fraction) else 1.0), "one-by-convention"
        return math.inf, "infinite"
    return num / den, "finite"


def _perturbation(shape, salt: int) -> np.ndarray:
    rng = np.random.default_rng(20_240_917 + salt)
    return rng.uniform(-PERTURBATION, PERTURBATION, size=shape)


def _degenerate_profile(A, B, x, y, exact) -> bool:
    tol = 0 if exact else DEGENERACY_TOL
    rows = A @ y
    cols = x @ B
    n_br1 = sum(v >= rows.max() - tol for v in rows)
    n_br2 = sum(v >= cols.max() - tol for v in cols)
    supp_x = sum(v > tol for v in x)
    supp_y = sum(v > tol for v in y)
    return n_br1 > supp_y or n_br2 > supp_x


def _dedupe(pairs, exact):
    out = []
    dup = False
    for x, y in pairs:
        for u, v in out:
            same = (
                all(a == b for a, b in zip(x, u)) and all(a == b for a, b in zip(y, v))
                if exact
                else np.allclose(x, u, atol=1e-9) and np.allclose(y, v, atol=1e-9)
            )
            if same:
                dup = True
                break
        else:
            out.append((x, y))
    return out, dup


def bimatrix_equilibria(A: np.ndarray, B: np.ndarray, exact: bool = False, backend=None):
    """Equilibria of the bimatrix game ``(A, B)`` where both players maximize.

    Returns ``(pairs, degenerate, perturbed)`` with ``pairs`` a list of
    ``(x, y)`` arrays.  Degenerate float games are re-solved after a fixed
    ``±1e-9`` perturbation.
    """

    def run(A, B):
        if exact:
            pairs, n_sing = _pykernels.support_enum_2p(A, B, 0, 0)
        else:
            mod = backend or kernels
            scale = max(1.0, float(np.abs(A).max()), float(np.abs(B).max()))
            pairs, n_sing = mod.support_enum_2p(
                np.ascontiguousarray(A, dtype=float),
                np.ascontiguousarray(B, dtype=float),
                BR_TOL,
                1e-12 * scale,
            )
        dtype = object if exact else float
        pairs = [(np.array(x, dtype=dtype), np.array(y, dtype=dtype)) for x, y in pairs]
        pairs, dup = _dedupe(pairs, exact)
        degenerate = n_sing > 0 or dup or any(_degenerate_profile(A, B, x, y, exact) for x, y in pairs)
        return pairs, degenerate

    pairs, degenerate = run(A, B)
    if not degenerate:
        return pairs, False, False
    dA = _perturbation(A.shape, 0)
    dB = _perturbation(B.shape, 1)
    if exact:
        dA = np.array([[Fraction(v) for v in row] for row in dA], dtype=object)
        dB = np.array([[Fraction(v) for v in row] for row in dB], dtype=object)
    perturbed, _ = run(A + dA, B + dB)
    return perturbed, True, True


def pure_equilibria(utility: np.ndarray, exact: bool = False) -> list:
    """Pure profiles where no player gains more than ``BR_TOL`` by deviating.

    ``utility`` has shape ``(|S_1|, ..., |S_n|, n)`` and every player maximizes.
    """
    tol = 0 if exact else BR_TOL
    n = utility.shape[-1]
    ok = np.ones(utility.shape[:-1], dtype=bool)
    for i in range(n):
        u = utility[..., i]
        best = u.max(axis=i, keepdims=True)
        ok &= (u >= best - tol)
    return [tuple(int(a) for a in idx) for idx in np.argwhere(ok)]


def _single_player(utility, exact):
    u = utility[..., 0]
    tol = 0 if exact else BR_TOL
    best = u.max()
    return [(int(k),) for k in range(u.shape[0]) if u[k] >= best - tol]


def equilibria_of_payoff(payoff: np.ndarray, sense: ObjectiveSense, pure_only: bool = False, backend=None):
    """Array-level enumeration for one state's payoff tensor ``(S_1..S_n, n)``.

    Returns ``(strategy tuples, degenerate, perturbed)``.
    """
    exact = payoff.dtype == object
    utility = payoff if sense.maximize else -payoff
    counts = payoff.shape[:-1]
    n = len(counts)

    def as_mixed(profiles):
        return [MixedProfile.pure(p, counts, exact).strategies for p in profiles]

    if n == 1:
        best = _single_player(utility, exact)
        return as_mixed(best), len(best) > 1, False
    if pure_only:
        return as_mixed(pure_equilibria(utility, exact)), False, False
    if n > 2:
        raise UnsupportedGameError(
            f"mixed equilibrium enumeration supports at most 2 players (got {n}); use pure_only=True"
        )
    if max(counts) > MAX_ACTIONS_2P:
        raise UnsupportedGameError(f"support enumeration limited to {MAX_ACTIONS_2P} actions per player, got {counts}")
    pairs, degenerate, perturbed = bimatrix_equilibria(utility[..., 0], utility[..., 1], exact, backend)
    return [(x, y) for x, y in pairs], degenerate, perturbed


def enumerate_equilibria(g: FiniteBayesianGame, pure_only: bool = False) -> EquilibriumSet:
    """All (vertex) Nash equilibria of a single-state game.

    Two-player games use support enumeration; one-player games list the best
    actions; games with three or more players require ``pure_only=True``.
    """
    if g.n_states != 1:
        raise ValueError(f"expected a single-state game, got {g.n_states} states")
    strategies, degenerate, perturbed = equilibria_of_payoff(g.payoff[0], g.sense, pure_only)
    return EquilibriumSet(tuple(MixedProfile(s) for s in strategies), degenerate, perturbed)


def worst_of_payoff(payoff: np.ndarray, sense: ObjectiveSense, pure_only: bool = False, backend=None):
    """Worst equilibrium welfare for one payoff tensor: ``(value, strategies, degenerate)``."""
    strategies, degenerate, _ = equilibria_of_payoff(payoff, sense, pure_only, backend)
    if not strategies:
        raise UnsupportedGameError("no equilibrium found (pure-only query on a game without pure equilibria)")
    w = payoff.sum(axis=-1)
    best_val = None
    best = None
    for s in strategies:
        val = expected_tensor(w, s)
        if best_val is None or (val > best_val if not sense.maximize else val < best_val):
            best_val, best = val, s
    return best_val, best, degenerate


def worst_equilibrium_welfare(g: FiniteBayesianGame, pure_only: bool = False):
    """Welfare of the worst enumerated equilibrium and that equilibrium.

    Worst means highest total cost or lowest total payoff; ties keep the
    first equilibrium found.
    """
    if g.n_states != 1:
        raise ValueError(f"expected a single-state game, got {g.n_states} states")
    val, strat, _ = worst_of_payoff(g.payoff[0], g.sense, pure_only)
    return val, MixedProfile(strat)


def price_of_anarchy(g: FiniteBayesianGame, pure_only: bool = False) -> PoAReport:
    """Worst equilibrium welfare over optimal welfare, for either objective sense."""
    if g.n_states != 1:
        raise ValueError(f"expected a single-state game, got {g.n_states} states")
    worst, strat, degenerate = worst_of_payoff(g.payoff[0], g.sense, pure_only)
    opt, profile = optimal_welfare(g)
    ratio, flag = ratio_with_conventions(worst, opt)
    return PoAReport(worst, opt, ratio, MixedProfile(strat), profile, flag, degenerate)


def poa_by_state(g: FiniteBayesianGame, pure_only: bool = False) -> list:
    return [price_of_anarchy(state_game(g, t), pure_only) for t in range(g.n_states)]


def poa_max(g: FiniteBayesianGame, pure_only: bool = False):
    """Worst per-state price of anarchy: max for cost games, min for payoff games."""
    ratios = [r.ratio for r in poa_by_state(g, pure_only)]
    return min(ratios) if g.sense.maximize else max(ratios)


def is_equilibrium(g: FiniteBayesianGame, x: MixedProfile, tol: float = BR_TOL) -> bool:
    """Independent check: no player improves by more than ``tol`` with a pure deviation."""
    if g.n_states != 1:
        raise ValueError("expected a single-state game")
    util = g.utility()[0]
    for i in range(g.n_players):
        others = [s for k, s in enumerate(x.strategies) if k != i]
        u = np.moveaxis(util[..., i], i, 0)
        dev = [expected_tensor(u[a], others) if others else u[a] for a in range(u.shape[0])]
        current = sum(p * d for p, d in zip(x.strategies[i], dev))
        if max(dev) > current + tol:
            return False
    return True


__all__ = [
    "EquilibriumSet",
    "PoAReport",
    "UnsupportedGameError",
    "bimatrix_equilibria",
    "enumerate_equilibria",
    "equilibria_of_payoff",
    "is_equilibrium",
    "poa_by_state",
    "poa_max",
    "price_of_anarchy",
    "pure_equilibria",
    "ratio_with_conventions",
    "welfare",
    "worst_equilibrium_welfare",
    "worst_of_payoff",
]
