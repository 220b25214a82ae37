"""Bayesian game data model, welfare functions and the JSON instance format."""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

# input slack for probability vectors; internal arithmetic checks use 1e-12
PROB_TOL = 1e-9
ARITH_TOL = 1e-12


class GameFormatError(ValueError):
    """Raised when a game or one of its fields violates an invariant.

    ``field`` holds the offending location, e.g. ``payoff[1][0][2]``.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ObjectiveSense(enum.Enum):
    COST_MIN = "cost"
    PAYOFF_MAX = "payoff"

    @property
    def maximize(self) -> bool:
        return self is ObjectiveSense.PAYOFF_MAX

    @classmethod
    def parse(cls, value: "str | ObjectiveSense") -> "ObjectiveSense":
        if isinstance(value, cls):
            return value
        for member in cls:
            if member.value == value or member.name.lower() == str(value).lower():
                return member
        raise GameFormatError("sense", f"expected 'cost' or 'payoff', got {value!r}")


PureProfile = tuple  # one action index per player


def _is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def as_number_array(values: Any, exact: bool) -> np.ndarray:
    """Convert nested numbers to a float array, or an object array of Fractions."""
    if exact:
        arr = np.array(values, dtype=object)
        flat = arr.reshape(-1)
        for k, v in enumerate(flat):
            flat[k] = v if isinstance(v, Fraction) else Fraction(str(v))
        return arr
    return np.array(values, dtype=float)


def check_distribution(vec: Any, field: str, tol: float = PROB_TOL) -> np.ndarray:
    """Validate a probability vector and return it as an array."""
    arr = vec if isinstance(vec, np.ndarray) else np.asarray(vec)
    if arr.ndim != 1 or arr.size == 0:
        raise GameFormatError(field, "expected a non-empty 1-d probability vector")
    for k, v in enumerate(arr):
        if v < 0:
            raise GameFormatError(f"{field}[{k}]", f"negative probability {v}")
    total = sum(arr.tolist())
    if abs(total - 1) > tol:
        raise GameFormatError(field, f"entries sum to {float(total)!r}, not 1")
    return arr


@dataclass(frozen=True, eq=False)
class FiniteBayesianGame:
    """A finite Bayesian game with per-state payoff (or cost) tensors.

    ``payoff`` has shape ``(n_states, |S_1|, ..., |S_n|, n)``; entry
    ``payoff[t, s_1, ..., s_n, i]`` is player ``i``'s payoff (or cost) at
    state ``t``.  Float arrays are the default; an object array of
    ``Fraction`` values selects exact arithmetic everywhere downstream.
    """

    states: tuple
    prior: np.ndarray
    actions: tuple
    payoff: np.ndarray
    sense: ObjectiveSense = ObjectiveSense.PAYOFF_MAX

    def __post_init__(self):
        object.__setattr__(self, "sense", ObjectiveSense.parse(self.sense))
        object.__setattr__(self, "states", tuple(str(s) for s in self.states))
        object.__setattr__(self, "actions", tuple(tuple(str(a) for a in acts) for acts in self.actions))
        exact = _is_exact(np.asarray(self.payoff))
        payoff = as_number_array(self.payoff, exact)
        prior = as_number_array(self.prior, exact)
        if not self.states:
            raise GameFormatError("states", "at least one state is required")
        if len(set(self.states)) != len(self.states):
            raise GameFormatError("states", "state labels must be unique")
        if prior.shape != (len(self.states),):
            raise GameFormatError("prior", f"expected {len(self.states)} entries, got {prior.shape}")
        check_distribution(prior, "prior")
        n = len(self.actions)
        if n < 1:
            raise GameFormatError("actions", "at least one player is required")
        for i, acts in enumerate(self.actions):
            if not acts:
                raise GameFormatError(f"actions[{i}]", "player has no actions")
            if len(set(acts)) != len(acts):
                raise GameFormatError(f"actions[{i}]", "action labels must be unique")
        expected = (len(self.states),) + tuple(len(a) for a in self.actions) + (n,)
        if payoff.shape != expected:
            raise GameFormatError("payoff", f"expected shape {expected}, got {payoff.shape}")
        if exact:
            bad = next((idx for idx, v in np.ndenumerate(payoff) if v < 0), None)
        else:
            if not np.all(np.isfinite(payoff)):
                bad = tuple(np.argwhere(~np.isfinite(payoff))[0])
                raise GameFormatError(_path("payoff", bad), "non-finite entry")
            neg = np.argwhere(payoff < 0)
            bad = tuple(neg[0]) if len(neg) else None
        if bad is not None:
            raise GameFormatError(_path("payoff", bad), f"negative entry {payoff[bad]}")
        payoff.setflags(write=False)
        prior.setflags(write=False)
        object.__setattr__(self, "payoff", payoff)
        object.__setattr__(self, "prior", prior)

    @classmethod
    def from_arrays(
        cls,
        payoff: Any,
        prior: Sequence | None = None,
        sense: "str | ObjectiveSense" = ObjectiveSense.PAYOFF_MAX,
        states: Sequence[str] | None = None,
        actions: Sequence[Sequence[str]] | None = None,
    ) -> "FiniteBayesianGame":
        """Build a game with default labels (``t0, t1, ...`` and ``a0, a1, ...``)."""
        arr = payoff if isinstance(payoff, np.ndarray) else np.asarray(payoff)
        if arr.dtype != object:
            arr = arr.astype(float)
        n_states = arr.shape[0]
        n = arr.ndim - 2
        if n < 1 or arr.shape[-1] != n:
            raise GameFormatError("payoff", f"shape {arr.shape} is not (states, S_1..S_n, n)")
        if prior is None:
            if arr.dtype == object:
                prior = [Fraction(1, n_states)] * n_states
            else:
                prior = np.full(n_states, 1.0 / n_states)
        if states is None:
            states = [f"t{k}" for k in range(n_states)]
        if actions is None:
            actions = [[f"a{k}" for k in range(arr.shape[1 + i])] for i in range(n)]
        return cls(tuple(states), prior, tuple(map(tuple, actions)), arr, ObjectiveSense.parse(sense))

    @property
    def n_players(self) -> int:
        return len(self.actions)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def action_counts(self) -> tuple:
        return tuple(len(a) for a in self.actions)

    @property
    def exact(self) -> bool:
        return _is_exact(self.payoff)

    def utility(self) -> np.ndarray:
        """Payoff tensor oriented so that every player maximizes."""
        return self.payoff if self.sense.maximize else -self.payoff

    def player_sum(self) -> np.ndarray:
        """Welfare tensor ``(n_states, |S_1|, ..., |S_n|)``: player-summed payoffs."""
        return self.payoff.sum(axis=-1)

    def state_index(self, state: "str | int") -> int:
        if isinstance(state, (int, np.integer)) and not isinstance(state, bool):
            if 0 <= state < self.n_states:
                return int(state)
        elif state in self.states:
            return self.states.index(state)
        raise KeyError(f"unknown state {state!r}; states are {list(self.states)}")

    def profile_label(self, profile: Sequence[int]) -> str:
        return ",".join(self.actions[i][a] for i, a in enumerate(profile))

    def profiles(self):
        """All pure profiles in lexicographic index order."""
        return itertools.product(*(range(k) for k in self.action_counts))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteBayesianGame):
            return NotImplemented
        return (
            self.states == other.states
            and self.actions == other.actions
            and self.sense == other.sense
            and self.payoff.shape == other.payoff.shape
            and bool(np.all(self.payoff == other.payoff))
            and bool(np.all(self.prior == other.prior))
        )

    __hash__ = None  # type: ignore[assignment]


def _path(root: str, index) -> str:
    return root + "".join(f"[{int(k)}]" for k in index)


@dataclass(frozen=True, eq=False)
class MixedProfile:
    """One probability vector per player."""

    strategies: tuple

    def __post_init__(self):
        vecs = []
        for i, x in enumerate(self.strategies):
            arr = x if isinstance(x, np.ndarray) else np.asarray(x)
            if arr.dtype != object:
                arr = arr.astype(float)
            check_distribution(arr, f"strategies[{i}]")
            arr.setflags(write=False)
            vecs.append(arr)
        object.__setattr__(self, "strategies", tuple(vecs))

    @classmethod
    def pure(cls, profile: Sequence[int], counts: Sequence[int], exact: bool = False) -> "MixedProfile":
        one = Fraction(1) if exact else 1.0
        vecs = []
        for a, k in zip(profile, counts):
            v = np.zeros(k, dtype=object if exact else float)
            if exact:
                v[:] = Fraction(0)
            v[a] = one
            vecs.append(v)
        return cls(tuple(vecs))

    @property
    def n_players(self) -> int:
        return len(self.strategies)

    def support(self, player: int, tol: float = ARITH_TOL) -> tuple:
        return tuple(int(k) for k, v in enumerate(self.strategies[player]) if v > tol)

    def is_pure(self, tol: float = ARITH_TOL) -> bool:
        return all(len(self.support(i, tol)) == 1 for i in range(self.n_players))

    def as_pure(self) -> PureProfile | None:
        if not self.is_pure():
            return None
        return tuple(self.support(i)[0] for i in range(self.n_players))

    def allclose(self, other: "MixedProfile", atol: float = 1e-9) -> bool:
        return self.n_players == other.n_players and all(
            a.shape == b.shape and np.allclose(a.astype(float), b.astype(float), atol=atol)
            for a, b in zip(self.strategies, other.strategies)
        )

    def __repr__(self) -> str:
        parts = ["[" + ", ".join(f"{float(v):.6g}" for v in x) + "]" for x in self.strategies]
        return f"MixedProfile({', '.join(parts)})"


def check_belief(b: Any, n_states: int) -> np.ndarray:
    """Validate a posterior belief over ``n_states`` states."""
    arr = b if isinstance(b, np.ndarray) else np.asarray(b)
    if arr.dtype != object:
        arr = arr.astype(float)
    if arr.shape != (n_states,):
        raise GameFormatError("belief", f"expected {n_states} entries, got shape {arr.shape}")
    return check_distribution(arr, "belief")


def _single(g: FiniteBayesianGame, payoff: np.ndarray, label: str) -> FiniteBayesianGame:
    one = [Fraction(1)] if g.exact else [1.0]
    return FiniteBayesianGame((label,), one, g.actions, payoff[np.newaxis], g.sense)


def state_game(g: FiniteBayesianGame, state: "str | int") -> FiniteBayesianGame:
    """The complete-information game played at ``state``."""
    t = g.state_index(state)
    if g.n_states == 1:
        return g
    return _single(g, g.payoff[t], g.states[t])


def posterior_payoff(g: FiniteBayesianGame, belief: np.ndarray) -> np.ndarray:
    """Belief-averaged payoff tensor ``(|S_1|, ..., |S_n|, n)`` without validation."""
    return np.tensordot(belief, g.payoff, axes=(0, 0))


def posterior_game(g: FiniteBayesianGame, belief: Any, label: str = "posterior") -> FiniteBayesianGame:
    """The single-state game whose payoffs are the ``belief``-weighted average."""
    b = check_belief(belief, g.n_states)
    if g.exact and b.dtype != object:
        b = as_number_array(b.tolist(), True)
    return _single(g, posterior_payoff(g, b), label)


def _require_single(g: FiniteBayesianGame) -> None:
    if g.n_states != 1:
        raise ValueError(f"expected a single-state game, got {g.n_states} states")


def expected_tensor(tensor: np.ndarray, strategies: Sequence[np.ndarray]):
    """Multilinear expectation of ``tensor`` (one axis per player) under ``strategies``."""
    out = tensor
    for x in strategies:
        out = np.tensordot(x, out, axes=(0, 0))
    return out[()] if isinstance(out, np.ndarray) and out.ndim == 0 else out


def welfare(g: FiniteBayesianGame, x: MixedProfile):
    """Expected player-summed payoff (or cost) of a single-state game under ``x``."""
    _require_single(g)
    if tuple(len(v) for v in x.strategies) != g.action_counts:
        raise ValueError(f"profile shape {[len(v) for v in x.strategies]} does not match {g.action_counts}")
    return expected_tensor(g.player_sum()[0], x.strategies)


def player_payoffs(g: FiniteBayesianGame, x: MixedProfile) -> list:
    """Per-player expected payoff (or cost) of a single-state game under ``x``."""
    _require_single(g)
    return [expected_tensor(g.payoff[0][..., i], x.strategies) for i in range(g.n_players)]


def optimal_welfare(g: FiniteBayesianGame):
    """Best pure-profile welfare of a single-state game and its profile.

    Maximum for payoff games, minimum for cost games; ties go to the first
    profile in lexicographic index order.
    """
    _require_single(g)
    w = g.player_sum()[0]
    flat = w.reshape(-1)
    k = int(np.argmax(flat) if g.sense.maximize else np.argmin(flat))
    return flat[k], tuple(int(a) for a in np.unravel_index(k, w.shape))


# ---------------------------------------------------------------------------
# JSON format


def _encode_number(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return float(v)


def _encode(arr):
    if not isinstance(arr, np.ndarray):
        return _encode_number(arr)
    if arr.ndim == 0:
        return _encode_number(arr[()])
    return [_encode(a) for a in arr]


def game_to_dict(g: FiniteBayesianGame) -> dict:
    return {
        "sense": g.sense.value,
        "states": list(g.states),
        "prior": _encode(g.prior),
        "players": g.n_players,
        "actions": [list(a) for a in g.actions],
        "payoff": _encode(g.payoff),
    }


def game_to_json(g: FiniteBayesianGame, indent: int | None = None) -> str:
    return json.dumps(game_to_dict(g), indent=indent)


def _has_string_numbers(obj) -> bool:
    if isinstance(obj, list):
        return any(_has_string_numbers(v) for v in obj)
    return isinstance(obj, str)


def _parse_number(v, field: str, exact: bool):
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise GameFormatError(field, f"expected a number, got {type(v).__name__}")
    if isinstance(v, str):
        try:
            num = Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise GameFormatError(field, f"cannot parse number {v!r}") from None
        return num if exact else float(num)
    return Fraction(str(v)) if exact else float(v)


def _parse_tensor(obj, shape: tuple, field: str, exact: bool):
    if not shape:
        return _parse_number(obj, field, exact)
    if not isinstance(obj, list):
        raise GameFormatError(field, f"expected a list of {shape[0]} entries")
    if len(obj) != shape[0]:
        raise GameFormatError(field, f"expected {shape[0]} entries, got {len(obj)}")
    return [_parse_tensor(v, shape[1:], f"{field}[{k}]", exact) for k, v in enumerate(obj)]


def game_from_dict(data: dict, exact: bool | None = None) -> FiniteBayesianGame:
    """Parse the JSON game format, raising ``GameFormatError`` with a field path.

    Numbers may be JSON numbers or strings such as ``"1/10"``.  With
    ``exact=None`` the game is exact iff any number is given as a string.
    """
    if not isinstance(data, dict):
        raise GameFormatError("<root>", "expected a JSON object")
    for key in ("sense", "states", "prior", "players", "actions", "payoff"):
        if key not in data:
            raise GameFormatError(key, "missing field")
    sense = ObjectiveSense.parse(data["sense"])
    states = data["states"]
    if not isinstance(states, list) or not states:
        raise GameFormatError("states", "expected a non-empty list of labels")
    n = data["players"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise GameFormatError("players", f"expected a positive integer, got {n!r}")
    actions = data["actions"]
    if not isinstance(actions, list) or len(actions) != n:
        raise GameFormatError("actions", f"expected {n} action lists")
    for i, acts in enumerate(actions):
        if not isinstance(acts, list) or not acts:
            raise GameFormatError(f"actions[{i}]", "expected a non-empty list of labels")
    if exact is None:
        exact = _has_string_numbers(data["prior"]) or _has_string_numbers(data["payoff"])
    prior = _parse_tensor(data["prior"], (len(states),), "prior", exact)
    shape = (len(states),) + tuple(len(a) for a in actions) + (n,)
    payoff = _parse_tensor(data["payoff"], shape, "payoff", exact)
    return FiniteBayesianGame(
        tuple(states),
        as_number_array(prior, exact),
        tuple(tuple(a) for a in actions),
        as_number_array(payoff, exact),
        sense,
    )


def game_from_json(text: str, exact: bool | None = None) -> FiniteBayesianGame:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise GameFormatError(f"line {err.lineno} column {err.colno}", err.msg) from None
    return game_from_dict(data, exact)


def load_game(path: "str | Path", exact: bool | None = None) -> FiniteBayesianGame:
    return game_from_json(Path(path).read_text(), exact)
