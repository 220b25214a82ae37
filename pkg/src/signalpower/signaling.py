"""Signaling scheme classes, their optimal values and power-of-signaling ratios.

Class values follow two selection rules.  Full information (FI), no
information (NI) and public schemes are scored by the worst equilibrium of
each posterior game.  Private (Pri) and ex-ante private (exP) values are LP
optima over obedient recommendation kernels.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from signalpower import lp as lpmod
from signalpower.equilibria import poa_max, ratio_with_conventions, worst_of_payoff
from signalpower.game import (
    FiniteBayesianGame,
    MixedProfile,
    as_number_array,
    check_distribution,
    optimal_welfare,
    posterior_payoff,
    state_game,
)

CLASSES = ("FI", "NI", "Pub", "Pri", "exP")
_RANK = {"FI": 0, "NI": 0, "Pub": 1, "Pri": 2, "exP": 3}
BOUND_SLACK = 1e-6
OBEDIENCE_TOL = 1e-7
SIGNAL_MASS_TOL = 1e-12
DEFAULT_GRID = 512


class ClassOrderError(ValueError):
    """The requested pair of scheme classes is not nested."""


class UnsupportedStateCount(ValueError):
    pass


def _kernel_array(kernel, n_states: int, name: str) -> np.ndarray:
    arr = np.asarray(kernel)
    exact = arr.dtype == object
    arr = as_number_array(kernel, exact)
    if arr.ndim != 2 or arr.shape[0] != n_states:
        raise ValueError(f"{name}: expected one row per state ({n_states}), got shape {arr.shape}")
    for t in range(n_states):
        check_distribution(arr[t], f"{name}[{t}]")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PublicScheme:
    """``kernel[t, k]`` is the probability of sending ``signals[k]`` at state ``t``."""

    signals: tuple
    kernel: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "signals", tuple(str(s) for s in self.signals))
        k = np.asarray(self.kernel)
        arr = _kernel_array(self.kernel, k.shape[0] if k.ndim == 2 else -1, "kernel")
        if arr.shape[1] != len(self.signals):
            raise ValueError(f"kernel has {arr.shape[1]} columns for {len(self.signals)} signals")
        object.__setattr__(self, "kernel", arr)

    @classmethod
    def full_information(cls, g: FiniteBayesianGame) -> "PublicScheme":
        return cls(g.states, _eye(g.n_states, g.exact))

    @classmethod
    def no_information(cls, g: FiniteBayesianGame) -> "PublicScheme":
        one = Fraction(1) if g.exact else 1.0
        return cls(("prior",), [[one] for _ in range(g.n_states)])

    def to_dict(self) -> dict:
        return {"type": "public", "signals": list(self.signals), "kernel": _encode(self.kernel)}


@dataclass(frozen=True, eq=False)
class PrivateScheme:
    """Obedient recommendations: ``kernel[t, k]`` is the probability of the
    ``k``-th pure profile (lexicographic order) at state ``t``."""

    kernel: np.ndarray
    signals: tuple = ()
    obedient: bool = False
    kind = "private"

    def __post_init__(self):
        k = np.asarray(self.kernel)
        arr = _kernel_array(self.kernel, k.shape[0] if k.ndim == 2 else -1, "kernel")
        object.__setattr__(self, "kernel", arr)
        object.__setattr__(self, "signals", tuple(str(s) for s in self.signals))

    @classmethod
    def from_profiles(cls, g: FiniteBayesianGame, per_state: dict, obedient: bool = False):
        """Build from ``{state: {profile tuple: probability}}``."""
        n_prof = int(np.prod(g.action_counts))
        zero = Fraction(0) if g.exact else 0.0
        kernel = np.empty((g.n_states, n_prof), dtype=object if g.exact else float)
        kernel[:] = zero
        for state, dist in per_state.items():
            t = g.state_index(state)
            for prof, p in dist.items():
                kernel[t, int(np.ravel_multi_index(prof, g.action_counts))] = p
        return cls(kernel, _profile_labels(g), obedient)

    def to_dict(self) -> dict:
        return {"type": self.kind, "signals": list(self.signals), "kernel": _encode(self.kernel)}


@dataclass(frozen=True, eq=False)
class ExAnteScheme(PrivateScheme):
    """Same kernel as a private scheme, checked against the opt-out constraints."""

    kind = "ex_ante"


@dataclass(frozen=True, eq=False)
class PoSReport:
    class_a: str
    class_b: str
    value_a: object
    value_b: object
    ratio: object
    flag: str

    def to_dict(self) -> dict:
        return {
            "pair": f"PoS({self.class_b}:{self.class_a})",
            "value_a": float(self.value_a),
            "value_b": float(self.value_b),
            "ratio": float(self.ratio),
            "flag": self.flag,
        }


@dataclass(frozen=True, eq=False)
class ObedienceViolation:
    player: int
    recommended: int
    deviation: int
    amount: object


@dataclass(frozen=True, eq=False)
class ObedienceReport:
    mode: str
    max_violation: object
    worst: ObedienceViolation | None
    violations: tuple
    tolerance: float = OBEDIENCE_TOL

    @property
    def passed(self) -> bool:
        return bool(self.max_violation <= self.tolerance)

    def maximal(self, rel: float = 1e-12) -> list:
        """All violations tied with the largest one."""
        top = self.max_violation
        return [v for v in self.violations if v.amount >= top - rel * max(1.0, abs(float(top)))]

    def to_dict(self, g: FiniteBayesianGame | None = None) -> dict:
        def triple(v):
            if g is None:
                return [v.player, v.recommended, v.deviation]
            acts = g.actions[v.player]
            return [f"P{v.player + 1}", acts[v.recommended], acts[v.deviation]]

        return {
            "mode": self.mode,
            "passed": self.passed,
            "max_violation": float(self.max_violation),
            "worst": None if self.worst is None else triple(self.worst),
            "violations": [triple(v) + [float(v.amount)] for v in self.violations],
        }


@dataclass(frozen=True, eq=False)
class BoundReport:
    values: dict
    poa_max: float
    pairs: tuple  # (PoSReport, ok)
    chain: tuple  # (i, j, j', lhs, rhs, ok)
    maximize: bool = False

    @property
    def violations(self) -> list:
        return [p for p, ok in self.pairs if not ok]

    @property
    def chain_violations(self) -> list:
        return [c for c in self.chain if not c[-1]]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.chain_violations


# ---------------------------------------------------------------------------
# helpers


def _eye(n: int, exact: bool) -> np.ndarray:
    if not exact:
        return np.eye(n)
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = Fraction(int(i == j))
    return out


def _encode(arr: np.ndarray):
    def enc(v):
        if isinstance(v, Fraction):
            return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return float(v)

    return [[enc(v) for v in row] for row in arr]


def _profile_labels(g: FiniteBayesianGame) -> tuple:
    return tuple(g.profile_label(p) for p in g.profiles())


def _better(maximize: bool, a, b) -> bool:
    return a > b if maximize else a < b


def scheme_from_dict(data: dict):
    kind = data.get("type")
    kernel = data.get("kernel")
    if kernel is None:
        raise ValueError("scheme: missing 'kernel'")
    exact = any(isinstance(v, str) for row in kernel for v in row)
    arr = as_number_array([[Fraction(v) if isinstance(v, str) else v for v in row] for row in kernel], exact)
    signals = data.get("signals", [])
    if kind == "public":
        return PublicScheme(signals, arr)
    if kind == "private":
        return PrivateScheme(arr, signals)
    if kind == "ex_ante":
        return ExAnteScheme(arr, signals)
    raise ValueError(f"scheme: unknown type {kind!r}")


def scheme_to_json(scheme, indent: int | None = None) -> str:
    return json.dumps(scheme.to_dict(), indent=indent)


def scheme_from_json(text: str):
    return scheme_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# FI / NI / public


def evaluate_full_information(g: FiniteBayesianGame):
    """Prior-weighted worst equilibrium welfare of every state game.

    Returns ``(value, [MixedProfile per state])``.
    """
    total = 0
    profiles = []
    for t in range(g.n_states):
        val, strat, _ = worst_of_payoff(g.payoff[t], g.sense)
        total = total + g.prior[t] * val
        profiles.append(MixedProfile(strat))
    return total, profiles


def evaluate_no_information(g: FiniteBayesianGame):
    """Worst equilibrium welfare of the prior-averaged game."""
    val, _, _ = worst_of_payoff(posterior_payoff(g, g.prior), g.sense)
    return val


def evaluate_public_scheme(g: FiniteBayesianGame, scheme: PublicScheme):
    """Expected worst-equilibrium welfare over the scheme's signals.

    Signals sent with total probability at most 1e-12 are skipped.
    """
    if scheme.kernel.shape[0] != g.n_states:
        raise ValueError(f"scheme has {scheme.kernel.shape[0]} state rows, game has {g.n_states} states")
    kernel = scheme.kernel
    prior = g.prior
    if g.exact != (kernel.dtype == object):
        kernel = as_number_array(kernel.tolist(), g.exact)
    total = 0
    for k in range(kernel.shape[1]):
        joint = prior * kernel[:, k]
        mass = joint.sum()
        if mass <= SIGNAL_MASS_TOL:
            continue
        val, _, _ = worst_of_payoff(posterior_payoff(g, joint / mass), g.sense)
        total = total + mass * val
    return total


def welfare_ceiling(g: FiniteBayesianGame):
    """Prior-weighted optimal welfare: no scheme of any class beats it."""
    return sum(g.prior[t] * optimal_welfare(state_game(g, t))[0] for t in range(g.n_states))


def posterior_grid(n_states: int, steps: int) -> np.ndarray:
    """Uniform grid on the belief simplex with spacing ``1/steps`` (|Θ| ≤ 3)."""
    if n_states == 1:
        return np.ones((1, 1))
    if n_states == 2:
        p = np.arange(steps + 1) / steps
        return np.column_stack([p, 1.0 - p])
    if n_states == 3:
        pts = [(i, j, steps - i - j) for i in range(steps + 1) for j in range(steps + 1 - i)]
        return np.array(pts, dtype=float) / steps
    raise UnsupportedStateCount(f"public grid search supports at most 3 states, got {n_states}")


def envelope_at(points: np.ndarray, values: np.ndarray, target: np.ndarray, maximize: bool):
    """Concave (``maximize``) or convex envelope of ``values`` at ``target``.

    Solves the LP over mixing weights on ``points`` whose average is
    ``target``.  Returns ``(value, weights)``; a basic optimum uses at most
    ``len(target)`` points.
    """
    n_pts, n_states = points.shape
    lpm = lpmod.LinearProgram(
        values, points.T, ("=",) * n_states, target, "max" if maximize else "min"
    )
    sol = lpmod.solve(lpm)
    if not sol.optimal:
        raise ArithmeticError(f"envelope LP ended with status {sol.status.value}")
    return sol.value, sol.point


def _format_posterior(b) -> str:
    return "(" + ",".join(f"{float(v):.6f}" for v in b) + ")"


def _scheme_from_mixture(prior, points, weights) -> PublicScheme:
    support = [k for k, w in enumerate(weights) if w > SIGNAL_MASS_TOL]
    kernel = np.zeros((len(prior), len(support)))
    for c, k in enumerate(support):
        for t in range(len(prior)):
            kernel[t, c] = weights[k] * points[k, t] / prior[t] if prior[t] > 0 else weights[k]
    # absorb rounding so each state row is an exact distribution
    kernel /= kernel.sum(axis=1, keepdims=True)
    return PublicScheme(tuple(_format_posterior(points[k]) for k in support), kernel)


@dataclass(frozen=True, eq=False)
class PublicSearch:
    value: object
    scheme: PublicScheme
    method: str  # "ceiling-ni", "ceiling-fi", "no-information", "grid"
    grid_values: np.ndarray | None = field(default=None, repr=False)
    grid_points: np.ndarray | None = field(default=None, repr=False)


def public_value_function(g: FiniteBayesianGame, points: np.ndarray) -> np.ndarray:
    """Worst equilibrium welfare of the posterior game at each belief in ``points``."""
    payoff = g.payoff.astype(float)
    return np.array([worst_of_payoff(np.tensordot(b, payoff, axes=(0, 0)), g.sense)[0] for b in points])


def search_public(g: FiniteBayesianGame, steps: int = DEFAULT_GRID) -> PublicSearch:
    """Optimal public scheme under worst-equilibrium selection.

    NI, then FI, is returned directly when it already reaches the welfare
    ceiling.  Otherwise the posterior value function is tabulated on a
    uniform grid (the prior is added as an extra point) and its envelope is
    taken at the prior; the no-information scheme wins ties.
    """
    maximize = g.sense.maximize
    ceiling = welfare_ceiling(g)
    ni = evaluate_no_information(g)
    tol = 0 if g.exact else 1e-12 * max(1.0, abs(float(ceiling)))
    if not _better(maximize, ceiling, ni + (tol if maximize else -tol)):
        return PublicSearch(ni, PublicScheme.no_information(g), "ceiling-ni")
    fi, _ = evaluate_full_information(g)
    if not _better(maximize, ceiling, fi + (tol if maximize else -tol)):
        return PublicSearch(fi, PublicScheme.full_information(g), "ceiling-fi")
    if g.n_states > 3:
        raise UnsupportedStateCount(f"public grid search supports at most 3 states, got {g.n_states}")

    prior = g.prior.astype(float)
    points = posterior_grid(g.n_states, steps)
    if not np.any(np.all(np.abs(points - prior) <= 1e-15, axis=1)):
        points = np.vstack([points, prior])
    values = public_value_function(g, points)
    value, weights = envelope_at(points, values, prior, maximize)
    ni_f = float(ni)
    if not _better(maximize, value, ni_f + (1e-9 if maximize else -1e-9)):
        return PublicSearch(ni_f, PublicScheme.no_information(g), "no-information", values, points)
    scheme = _scheme_from_mixture(prior, points, weights)
    return PublicSearch(float(value), scheme, "grid", values, points)


def optimal_public_value(g: FiniteBayesianGame, grid: int = DEFAULT_GRID):
    """``(value, PublicScheme)`` for the best public scheme (grid-approximate)."""
    res = search_public(g, grid)
    return res.value, res.scheme


# ---------------------------------------------------------------------------
# private and ex-ante private LPs


def _obedience_rows(g: FiniteBayesianGame, ex_ante: bool):
    """Coefficient rows over the flattened kernel, one per obedience constraint.

    A row for ``(i, a, a')`` holds ``λ(t)·(u_i(s) − u_i(a', s_-i))`` on
    variables with ``s_i = a`` (all ``s`` in ex-ante mode, deviation ``a'``
    fixed); obedience means the row times the kernel is ``≥ 0`` in utility
    terms.  Returns ``[(i, a, a', coeffs)]`` with ``a = -1`` in ex-ante mode.
    """
    util = g.utility()
    counts = g.action_counts
    n_prof = int(np.prod(counts))
    exact = g.exact
    zero = Fraction(0) if exact else 0.0
    rows = []
    for i in range(g.n_players):
        for dev in range(counts[i]):
            gain = np.empty((g.n_states,) + counts, dtype=object if exact else float)
            # u_i(s) - u_i(dev, s_-i)
            idx = [slice(None)] * (g.n_players + 1)
            idx[i + 1] = slice(dev, dev + 1)
            gain[...] = util[..., i] - util[..., i][tuple(idx)]
            weighted = gain * g.prior.reshape((-1,) + (1,) * g.n_players)
            flat = weighted.reshape(g.n_states, n_prof)
            if ex_ante:
                rows.append((i, -1, dev, flat.reshape(-1)))
                continue
            for rec in range(counts[i]):
                if rec == dev:
                    continue
                mask = np.zeros(counts, dtype=bool)
                sel = [slice(None)] * g.n_players
                sel[i] = rec
                mask[tuple(sel)] = True
                coeffs = np.where(np.broadcast_to(mask.reshape(-1), flat.shape), flat, zero)
                rows.append((i, rec, dev, coeffs.reshape(-1)))
    return rows


def _signaling_lp(g: FiniteBayesianGame, ex_ante: bool) -> lpmod.LinearProgram:
    n_prof = int(np.prod(g.action_counts))
    n_var = g.n_states * n_prof
    exact = g.exact
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    welfare = g.player_sum().reshape(g.n_states, n_prof)
    objective = (welfare * g.prior.reshape(-1, 1)).reshape(-1)
    A, senses, rhs = [], [], []
    for t in range(g.n_states):
        row = np.empty(n_var, dtype=object if exact else float)
        row[:] = zero
        row[t * n_prof:(t + 1) * n_prof] = one
        A.append(row)
        senses.append("=")
        rhs.append(one)
    for _, _, _, coeffs in _obedience_rows(g, ex_ante):
        if any(c != 0 for c in coeffs):
            A.append(coeffs)
            senses.append(">=")
            rhs.append(zero)
    return lpmod.LinearProgram(objective, np.array(A), tuple(senses), np.array(rhs), "max" if g.sense.maximize else "min")


def _solve_scheme_lp(g: FiniteBayesianGame, ex_ante: bool):
    lpm = _signaling_lp(g, ex_ante)
    try:
        sol = lpmod.solve(lpm, exact=g.exact)
    except lpmod.LpNumericalError:
        # float pivoting lost accuracy; redo the same pivots in rationals
        sol = lpmod.solve(lpm, exact=True)
        sol = lpmod.LpSolution(sol.status, float(sol.value), sol.point.astype(float), sol.iterations)
    if not sol.optimal:
        raise ArithmeticError(f"signaling LP returned {sol.status.value}; the LP is always feasible")
    n_prof = int(np.prod(g.action_counts))
    kernel = sol.point.reshape(g.n_states, n_prof)
    if not g.exact:
        kernel = np.clip(kernel, 0.0, None)
        kernel = kernel / kernel.sum(axis=1, keepdims=True)
    cls = ExAnteScheme if ex_ante else PrivateScheme
    return sol.value, cls(kernel, _profile_labels(g), True)


def optimal_private_value(g: FiniteBayesianGame):
    """Best welfare over obedient private recommendation kernels: ``(value, PrivateScheme)``."""
    return _solve_scheme_lp(g, ex_ante=False)


def optimal_ex_ante_value(g: FiniteBayesianGame):
    """Best welfare under the opt-out constraints only: ``(value, ExAnteScheme)``."""
    return _solve_scheme_lp(g, ex_ante=True)


def evaluate_private_scheme(g: FiniteBayesianGame, scheme: PrivateScheme):
    """Prior-weighted welfare when every recommendation is followed."""
    n_prof = int(np.prod(g.action_counts))
    welfare = g.player_sum().reshape(g.n_states, n_prof)
    kernel = scheme.kernel
    if kernel.shape != welfare.shape:
        raise ValueError(f"kernel shape {kernel.shape} does not match {welfare.shape}")
    return sum(g.prior[t] * (kernel[t] * welfare[t]).sum() for t in range(g.n_states))


def check_obedience(g: FiniteBayesianGame, scheme, mode: str = "exact") -> ObedienceReport:
    """Evaluate every obedience constraint of ``scheme``.

    ``mode="exact"`` checks each recommended action against each deviation;
    ``mode="ex_ante"`` checks only the opt-out constraints.  Violations are
    listed in (player, recommendation, deviation) order.
    """
    if mode not in ("exact", "ex_ante"):
        raise ValueError(f"mode must be 'exact' or 'ex_ante', got {mode!r}")
    kernel = scheme.kernel
    if g.exact and kernel.dtype != object:
        kernel = as_number_array(kernel.tolist(), True)
    flat = kernel.reshape(-1)
    violations = []
    worst = None
    top = 0
    for i, rec, dev, coeffs in _obedience_rows(g, mode == "ex_ante"):
        slack = coeffs @ flat
        if slack < 0:
            v = ObedienceViolation(i, rec, dev, -slack)
            violations.append(v)
            if worst is None or v.amount > top:
                worst, top = v, v.amount
    return ObedienceReport(mode, top, worst, tuple(violations))


# ---------------------------------------------------------------------------
# PoS ratios


def class_value(g: FiniteBayesianGame, cls: str, grid: int = DEFAULT_GRID):
    if cls == "FI":
        return evaluate_full_information(g)[0]
    if cls == "NI":
        return evaluate_no_information(g)
    if cls == "Pub":
        return optimal_public_value(g, grid)[0]
    if cls == "Pri":
        return optimal_private_value(g)[0]
    if cls == "exP":
        return optimal_ex_ante_value(g)[0]
    raise ValueError(f"unknown scheme class {cls!r}; expected one of {CLASSES}")


def check_class_order(class_a: str, class_b: str) -> None:
    for c in (class_a, class_b):
        if c not in _RANK:
            raise ValueError(f"unknown scheme class {c!r}; expected one of {CLASSES}")
    if class_a == class_b:
        return
    if _RANK[class_a] >= _RANK[class_b]:
        raise ClassOrderError(f"{class_a} is not contained in {class_b}")


def pos_from_values(class_a: str, class_b: str, value_a, value_b) -> PoSReport:
    """PoS(b:a) = value_a / value_b, with the 0/0 and x/0 conventions."""
    check_class_order(class_a, class_b)
    ratio, flag = ratio_with_conventions(value_a, value_b)
    return PoSReport(class_a, class_b, value_a, value_b, ratio, flag)


def pos_ratio(g: FiniteBayesianGame, class_a: str, class_b: str, grid: int = DEFAULT_GRID, values: dict | None = None) -> PoSReport:
    """Power of signaling of ``class_b`` over the more restricted ``class_a``.

    ``values`` may carry precomputed class values keyed by class name.
    """
    check_class_order(class_a, class_b)
    values = {} if values is None else values
    for c in (class_a, class_b):
        if c not in values:
            values[c] = class_value(g, c, grid)
    return pos_from_values(class_a, class_b, values[class_a], values[class_b])


def _within(bound_ok_le: bool, lhs, rhs, slack: float) -> bool:
    if math.isinf(float(lhs)) or math.isinf(float(rhs)):
        return (lhs <= rhs) if bound_ok_le else (lhs >= rhs)
    return (lhs <= rhs + slack) if bound_ok_le else (lhs >= rhs - slack)


def verify_pos_bound(g: FiniteBayesianGame, grid: int = DEFAULT_GRID, values: dict | None = None) -> BoundReport:
    """Check every nested pair of {FI, Pub, Pri, exP} against the PoA bound
    and the monotone chain PoS(j:i) vs PoS(j':i).

    Cost games need PoS ≤ PoA_max (and a non-decreasing chain); payoff games
    need PoS ≥ PoA_min (non-increasing chain).  Slack is 1e-6.
    """
    order = ("FI", "Pub", "Pri", "exP")
    values = {} if values is None else dict(values)
    for c in order:
        if c not in values:
            values[c] = class_value(g, c, grid)
    return bound_report(values, float(poa_max(g)), g.sense.maximize)


def bound_report(values: dict, bound: float, maximize: bool) -> BoundReport:
    """Bound and chain checks over whichever of FI, Pub, Pri, exP are in ``values``."""
    order = [c for c in ("FI", "Pub", "Pri", "exP") if c in values]
    le = not maximize
    pairs = []
    for a, b in itertools.combinations(order, 2):
        rep = pos_from_values(a, b, values[a], values[b])
        pairs.append((rep, _within(le, float(rep.ratio), bound, BOUND_SLACK)))
    ratio = {(p.class_a, p.class_b): float(p.ratio) for p, _ in pairs}
    chain = []
    for i, j, k in itertools.combinations(order, 3):
        lhs, rhs = ratio[(i, j)], ratio[(i, k)]
        chain.append((i, j, k, lhs, rhs, _within(le, lhs, rhs, BOUND_SLACK)))
    return BoundReport({c: values[c] for c in order}, bound, tuple(pairs), tuple(chain), maximize)


__all__ = [
    "BoundReport",
    "bound_report",
    "CLASSES",
    "ClassOrderError",
    "ExAnteScheme",
    "ObedienceReport",
    "ObedienceViolation",
    "PoSReport",
    "PrivateScheme",
    "PublicScheme",
    "PublicSearch",
    "UnsupportedStateCount",
    "check_class_order",
    "check_obedience",
    "class_value",
    "envelope_at",
    "evaluate_full_information",
    "evaluate_no_information",
    "evaluate_private_scheme",
    "evaluate_public_scheme",
    "optimal_ex_ante_value",
    "optimal_private_value",
    "optimal_public_value",
    "pos_from_values",
    "pos_ratio",
    "posterior_grid",
    "public_value_function",
    "scheme_from_dict",
    "scheme_from_json",
    "scheme_to_json",
    "search_public",
    "verify_pos_bound",
    "welfare_ceiling",
]
