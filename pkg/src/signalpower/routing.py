"""Non-atomic routing with state-dependent polynomial latencies.

Latencies are ``a·x^d + b`` per edge and state.  Wardrop equilibria and
optimal flows come from path-based Frank-Wolfe; flows of populations with
different beliefs are certified rather than solved for.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from signalpower import kernels
from signalpower.game import check_distribution
from signalpower.signaling import PublicScheme, envelope_at, posterior_grid

REL_GAP_TOL = 1e-10
MAX_ITER = 100_000
LINE_SEARCH_TOL = 1e-12
WARDROP_TOL = 1e-6
USED_FLOW = 1e-9
MAX_PATHS = 10_000
PIGOU_ALPHA_MAX = 1e3


class RoutingError(ValueError):
    """Malformed routing instance, flow or scheme."""


class ConvergenceError(ArithmeticError):
    def __init__(self, message: str, rel_gap: float):
        super().__init__(f"{message} (final relative gap {rel_gap:.3e})")
        self.rel_gap = rel_gap


def xpow(x: float, d: float) -> float:
    """``x**d`` on ``x ≥ 0`` with ``0**0 = 1`` and ``0**d = 0`` for ``d > 0``."""
    if x <= 0.0:
        return 1.0 if d == 0.0 else 0.0
    return math.exp(d * math.log(x))


@dataclass(frozen=True)
class Latency:
    """``a·x^d + b`` with ``a, b, d ≥ 0``."""

    a: float = 0.0
    d: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        for name in ("a", "d", "b"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise RoutingError(f"latency.{name} must be finite and non-negative, got {v}")
            object.__setattr__(self, name, v)

    @classmethod
    def constant(cls, b: float) -> "Latency":
        return cls(0.0, 1.0, b)

    @classmethod
    def power(cls, d: float, a: float = 1.0) -> "Latency":
        return cls(a, d, 0.0)

    def __call__(self, x: float) -> float:
        return self.a * xpow(x, self.d) + self.b

    def marginal(self, x: float) -> float:
        """Derivative of ``x·c(x)``."""
        return self.a * (self.d + 1.0) * xpow(x, self.d) + self.b

    def to_dict(self) -> dict:
        return {"a": self.a, "d": self.d, "b": self.b}


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    latencies: tuple  # one Latency per state


@dataclass(frozen=True)
class Commodity:
    source: str
    sink: str
    demand: float


@dataclass(frozen=True, eq=False)
class RoutingInstance:
    """A DAG with per-state edge latencies, commodities and a prior over states."""

    nodes: tuple
    edges: tuple
    commodities: tuple
    prior: np.ndarray
    states: tuple = ()
    paths: tuple = field(init=False, repr=False)
    path_commodity: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        nodes = tuple(str(v) for v in self.nodes)
        if len(set(nodes)) != len(nodes):
            raise RoutingError("nodes: labels must be unique")
        prior = np.asarray(self.prior, dtype=float)
        check_distribution(prior, "prior")
        states = tuple(str(s) for s in self.states) or tuple(f"t{k}" for k in range(prior.size))
        if len(states) != prior.size:
            raise RoutingError(f"states: {len(states)} labels for {prior.size} prior entries")
        edges = []
        for k, e in enumerate(self.edges):
            if e.tail not in nodes or e.head not in nodes:
                raise RoutingError(f"edges[{k}]: unknown endpoint in {e.tail!r} -> {e.head!r}")
            lats = tuple(e.latencies)
            if len(lats) != prior.size:
                raise RoutingError(f"edges[{k}].latency: expected {prior.size} states, got {len(lats)}")
            edges.append(Edge(e.tail, e.head, lats))
        comms = []
        for k, c in enumerate(self.commodities):
            if c.source not in nodes or c.sink not in nodes:
                raise RoutingError(f"commodities[{k}]: unknown node")
            if not (c.demand >= 0 and math.isfinite(c.demand)):
                raise RoutingError(f"commodities[{k}].demand must be finite and >= 0")
            comms.append(Commodity(c.source, c.sink, float(c.demand)))
        prior.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "commodities", tuple(comms))
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "states", states)
        self._check_acyclic()
        paths, owner = [], []
        for k, c in enumerate(comms):
            found = self._enumerate(c.source, c.sink)
            if not found:
                raise RoutingError(f"commodities[{k}]: no path from {c.source!r} to {c.sink!r}")
            paths.extend(found)
            owner.extend([k] * len(found))
            if len(paths) > MAX_PATHS:
                raise RoutingError(f"more than {MAX_PATHS} paths")
        owner_arr = np.array(owner, dtype=np.intp)
        owner_arr.setflags(write=False)
        object.__setattr__(self, "paths", tuple(paths))
        object.__setattr__(self, "path_commodity", owner_arr)

    def _check_acyclic(self):
        indeg = {v: 0 for v in self.nodes}
        out = {v: [] for v in self.nodes}
        for e in self.edges:
            indeg[e.head] += 1
            out[e.tail].append(e.head)
        queue = [v for v in self.nodes if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        if seen != len(self.nodes):
            raise RoutingError("edges: the network must be acyclic")

    def _enumerate(self, source: str, sink: str) -> list:
        out = {v: [] for v in self.nodes}
        for k, e in enumerate(self.edges):
            out[e.tail].append(k)
        found = []

        def walk(v, acc):
            if v == sink:
                found.append(tuple(acc))
                return
            for k in out[v]:
                acc.append(k)
                walk(self.edges[k].head, acc)
                acc.pop()
                if len(found) > MAX_PATHS:
                    return

        if source != sink:
            walk(source, [])
        return found

    @property
    def n_states(self) -> int:
        return self.prior.size

    @property
    def n_paths(self) -> int:
        return len(self.paths)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def commodity_paths(self, k: int) -> list:
        return [p for p in range(self.n_paths) if self.path_commodity[p] == k]

    def path_label(self, p: int) -> str:
        return "+".join(f"e{e}" for e in self.paths[p])

    def edge_flows(self, path_flows: np.ndarray) -> np.ndarray:
        x = np.zeros(self.n_edges)
        for p, edges in enumerate(self.paths):
            for e in edges:
                x[e] += path_flows[p]
        return x

    def edge_costs(self, x: np.ndarray, state: int) -> np.ndarray:
        return np.array([e.latencies[state](x[k]) for k, e in enumerate(self.edges)])

    def path_costs(self, x: np.ndarray, state: int) -> np.ndarray:
        ce = self.edge_costs(x, state)
        return np.array([ce[list(p)].sum() for p in self.paths])

    def total_cost(self, x: np.ndarray, belief) -> float:
        """Belief-expected ``Σ_e x_e c_e(x_e)`` at edge flows ``x``."""
        return float(sum(b * (x @ self.edge_costs(x, t)) for t, b in enumerate(belief) if b > 0))

    # kernel arrays -------------------------------------------------------

    def _terms(self, belief):
        """Flattened latency terms of the belief-averaged network."""
        ptr, ta, td, const = [0], [], [], []
        for e in self.edges:
            merged: dict = {}
            c = 0.0
            for t, lat in enumerate(e.latencies):
                w = float(belief[t])
                if w <= 0.0:
                    continue
                c += w * lat.b
                if lat.a > 0.0:
                    if lat.d == 0.0:
                        c += w * lat.a
                    else:
                        merged[lat.d] = merged.get(lat.d, 0.0) + w * lat.a
            for d in sorted(merged):
                ta.append(merged[d])
                td.append(d)
            const.append(c)
            ptr.append(len(ta))
        return (
            np.array(ptr, dtype=np.intp),
            np.array(ta, dtype=float),
            np.array(td, dtype=float),
            np.array(const, dtype=float),
        )

    def _path_arrays(self):
        ptr = [0]
        flat = []
        for p in self.paths:
            flat.extend(p)
            ptr.append(len(flat))
        comm_ptr = [0]
        for k in range(len(self.commodities)):
            comm_ptr.append(comm_ptr[-1] + int(np.sum(self.path_commodity == k)))
        return (
            np.array(ptr, dtype=np.intp),
            np.array(flat, dtype=np.intp),
            np.array(comm_ptr, dtype=np.intp),
            np.array([c.demand for c in self.commodities], dtype=float),
        )

    # JSON ----------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "states": list(self.states),
            "edges": [
                {"from": e.tail, "to": e.head, "latency": [lat.to_dict() for lat in e.latencies]}
                for e in self.edges
            ],
            "commodities": [{"source": c.source, "sink": c.sink, "demand": c.demand} for c in self.commodities],
            "prior": [float(v) for v in self.prior],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RoutingInstance):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None  # type: ignore[assignment]


def routing_from_dict(data: dict) -> RoutingInstance:
    for key in ("nodes", "edges", "commodities", "prior"):
        if key not in data:
            raise RoutingError(f"missing field {key!r}")
    edges = []
    for k, e in enumerate(data["edges"]):
        try:
            lats = e["latency"]
            if isinstance(lats, dict):
                lats = [lats] * len(data["prior"])
            edges.append(Edge(str(e["from"]), str(e["to"]), tuple(Latency(**lat) for lat in lats)))
        except (KeyError, TypeError) as exc:
            raise RoutingError(f"edges[{k}]: {exc}") from exc
    comms = []
    for k, c in enumerate(data["commodities"]):
        try:
            comms.append(Commodity(str(c["source"]), str(c["sink"]), float(c["demand"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise RoutingError(f"commodities[{k}]: {exc}") from exc
    return RoutingInstance(tuple(data["nodes"]), tuple(edges), tuple(comms), data["prior"], tuple(data.get("states", ())))


def routing_from_json(text: str) -> RoutingInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RoutingError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return routing_from_dict(data)


def load_routing(path: "str | Path") -> RoutingInstance:
    return routing_from_json(Path(path).read_text())


# ---------------------------------------------------------------------------
# flows


@dataclass(frozen=True, eq=False)
class FlowProfile:
    """Path flows of one population with a common belief, plus solver diagnostics."""

    path_flows: np.ndarray
    edge_flows: np.ndarray
    cost: float
    iterations: int = 0
    rel_gap: float = 0.0
    max_violation: float = 0.0  # worst used-path excess over the cheapest path
    history: tuple = field(default=(), repr=False)


def _as_belief(inst: RoutingInstance, belief) -> np.ndarray:
    if isinstance(belief, (int, np.integer, str)):
        t = inst.states.index(belief) if isinstance(belief, str) else int(belief)
        b = np.zeros(inst.n_states)
        b[t] = 1.0
        return b
    b = np.asarray(belief, dtype=float)
    if b.shape != (inst.n_states,):
        raise RoutingError(f"belief: expected {inst.n_states} entries, got shape {b.shape}")
    check_distribution(b, "belief")
    return b


def _expected_path_costs(inst: RoutingInstance, x: np.ndarray, belief, marginal: bool = False) -> np.ndarray:
    out = np.zeros(inst.n_paths)
    for t, w in enumerate(belief):
        if w <= 0:
            continue
        if marginal:
            ce = np.array([e.latencies[t].marginal(x[k]) for k, e in enumerate(inst.edges)])
        else:
            ce = inst.edge_costs(x, t)
        out += w * np.array([ce[list(p)].sum() for p in inst.paths])
    return out


def _violation(inst: RoutingInstance, flows: np.ndarray, costs: np.ndarray) -> float:
    worst = 0.0
    for k in range(len(inst.commodities)):
        ps = inst.commodity_paths(k)
        cmin = min(costs[p] for p in ps)
        for p in ps:
            if flows[p] > USED_FLOW:
                worst = max(worst, costs[p] - cmin)
    return worst


def _frank_wolfe(inst: RoutingInstance, belief: np.ndarray, mode: int, backend=None) -> FlowProfile:
    mod = backend or kernels
    ptr, ta, td, const = inst._terms(belief)
    pp, pe, cp, dem = inst._path_arrays()
    flows, it, rel, hist = mod.fw_solve(
        ptr, ta, td, const, pp, pe, cp, dem, mode, REL_GAP_TOL, MAX_ITER, LINE_SEARCH_TOL
    )
    if rel > REL_GAP_TOL:
        raise ConvergenceError("Frank-Wolfe did not converge", rel)
    flows = np.asarray(flows, dtype=float)
    x = inst.edge_flows(flows)
    costs = _expected_path_costs(inst, x, belief, marginal=(mode == 1))
    return FlowProfile(flows, x, inst.total_cost(x, belief), it, rel, _violation(inst, flows, costs), tuple(hist))


def wardrop_equilibrium(inst: RoutingInstance, belief=None, backend=None) -> FlowProfile:
    """Wardrop flow for a population sharing ``belief`` (defaults to the prior).

    ``cost`` is the belief-expected total latency.  ``belief`` may also be a
    state label or index for full information at that state.
    """
    b = inst.prior if belief is None else _as_belief(inst, belief)
    return _frank_wolfe(inst, b, 0, backend)


def optimal_flow(inst: RoutingInstance, state=0, backend=None) -> FlowProfile:
    """Minimum total-cost flow at ``state`` (a label, an index or a belief vector)."""
    return _frank_wolfe(inst, _as_belief(inst, state), 1, backend)


def full_information_cost(inst: RoutingInstance) -> float:
    """Prior-weighted Wardrop cost when every state is revealed."""
    return float(sum(inst.prior[t] * wardrop_equilibrium(inst, t).cost for t in range(inst.n_states) if inst.prior[t] > 0))


def optimal_cost_floor(inst: RoutingInstance) -> float:
    """Prior-weighted optimal cost; no signaling scheme goes below it."""
    return float(sum(inst.prior[t] * optimal_flow(inst, t).cost for t in range(inst.n_states) if inst.prior[t] > 0))


def routing_poa(inst: RoutingInstance, state) -> float:
    eq = wardrop_equilibrium(inst, state).cost
    opt = optimal_flow(inst, state).cost
    if opt == 0:
        return 1.0 if eq == 0 else math.inf
    return eq / opt


@dataclass(frozen=True, eq=False)
class RoutingPublicSearch:
    value: float
    scheme: PublicScheme
    method: str
    grid_values: np.ndarray | None = field(default=None, repr=False)
    grid_points: np.ndarray | None = field(default=None, repr=False)


def optimal_public_cost(inst: RoutingInstance, steps: int = 512) -> RoutingPublicSearch:
    """Convex envelope of the posterior Wardrop cost on a uniform grid, taken at the prior.

    The prior is added to the grid when it is not already a grid point; the
    no-information scheme wins ties.
    """
    prior = inst.prior
    points = posterior_grid(inst.n_states, steps)
    if not np.any(np.all(np.abs(points - prior) <= 1e-15, axis=1)):
        points = np.vstack([points, prior])
    values = np.array([wardrop_equilibrium(inst, b).cost for b in points])
    value, weights = envelope_at(points, values, prior, maximize=False)
    ni = wardrop_equilibrium(inst).cost
    if ni <= value + 1e-9:
        return RoutingPublicSearch(ni, PublicScheme(("prior",), np.ones((inst.n_states, 1))), "no-information", values, points)
    support = [k for k, w in enumerate(weights) if w > 1e-12]
    kernel = np.array([[weights[k] * points[k, t] / prior[t] if prior[t] > 0 else weights[k] for k in support] for t in range(inst.n_states)])
    kernel /= kernel.sum(axis=1, keepdims=True)
    labels = ["(" + ",".join(f"{v:.6f}" for v in points[k]) + ")" for k in support]
    return RoutingPublicSearch(float(value), PublicScheme(labels, kernel), "grid", values, points)


def evaluate_routing_public_scheme(inst: RoutingInstance, scheme: PublicScheme) -> float:
    total = 0.0
    for k in range(scheme.kernel.shape[1]):
        joint = inst.prior * scheme.kernel[:, k].astype(float)
        mass = joint.sum()
        if mass <= 1e-12:
            continue
        total += mass * wardrop_equilibrium(inst, joint / mass).cost
    return total


# ---------------------------------------------------------------------------
# belief segments


@dataclass(frozen=True, eq=False)
class BeliefSegment:
    """A share of one commodity's demand holding a common belief.

    ``belief=None`` means the segment is told the realized state; such a
    segment may route differently in each state.
    """

    share: float
    belief: np.ndarray | None = None
    commodity: int = 0
    label: str = ""

    @property
    def informed(self) -> bool:
        return self.belief is None


@dataclass(frozen=True, eq=False)
class SegmentedFlow:
    """``flows[g, t, p]``: path flow of segment ``g`` in state ``t``."""

    segments: tuple
    flows: np.ndarray


@dataclass(frozen=True, eq=False)
class SegmentReport:
    expected_cost: float
    certified: bool
    worst_segment: int | None
    worst_path: int | None
    worst_excess: float
    state_costs: tuple


def _check_segments(inst: RoutingInstance, prop: SegmentedFlow) -> np.ndarray:
    flows = np.asarray(prop.flows, dtype=float)
    n_seg = len(prop.segments)
    if flows.shape != (n_seg, inst.n_states, inst.n_paths):
        raise RoutingError(f"flows: expected shape {(n_seg, inst.n_states, inst.n_paths)}, got {flows.shape}")
    if np.any(flows < -1e-12):
        raise RoutingError("flows: negative path flow")
    for k, c in enumerate(inst.commodities):
        total = sum(s.share for s in prop.segments if s.commodity == k)
        if abs(total - c.demand) > 1e-9:
            raise RoutingError(f"segments of commodity {k} hold {total}, demand is {c.demand}")
    for g, seg in enumerate(prop.segments):
        own = inst.path_commodity == seg.commodity
        for t in range(inst.n_states):
            if abs(flows[g, t, own].sum() - seg.share) > 1e-9 or np.any(flows[g, t, ~own] > 1e-12):
                raise RoutingError(f"segment {g} state {t}: flows do not route its share {seg.share}")
        if not seg.informed:
            check_distribution(np.asarray(seg.belief, dtype=float), f"segments[{g}].belief")
            if np.any(np.abs(flows[g] - flows[g, 0]) > 1e-12):
                raise RoutingError(f"segment {g} is uninformed but routes differently across states")
    return flows


def evaluate_segmented_flow(inst: RoutingInstance, proposal: SegmentedFlow) -> SegmentReport:
    """Expected cost of a belief-segmented flow and its equilibrium certificate.

    The certificate holds iff every segment's used paths cost at most 1e-6
    more than its cheapest path, with costs taken under the segment's belief
    (or the realized state for informed segments) at the aggregate flow.
    """
    flows = _check_segments(inst, proposal)
    agg = flows.sum(axis=0)
    x = [inst.edge_flows(agg[t]) for t in range(inst.n_states)]
    pc = np.array([inst.path_costs(x[t], t) for t in range(inst.n_states)])
    state_costs = tuple(float(x[t] @ inst.edge_costs(x[t], t)) for t in range(inst.n_states))
    expected = float(sum(inst.prior[t] * state_costs[t] for t in range(inst.n_states)))
    worst = (None, None, 0.0)
    for g, seg in enumerate(proposal.segments):
        ps = inst.commodity_paths(seg.commodity)
        if seg.informed:
            checks = [(pc[t], flows[g, t]) for t in range(inst.n_states) if inst.prior[t] > 0]
        else:
            b = np.asarray(seg.belief, dtype=float)
            checks = [(b @ pc, flows[g, 0])]
        for costs, f in checks:
            cmin = min(costs[p] for p in ps)
            for p in ps:
                excess = costs[p] - cmin
                if f[p] > USED_FLOW and excess > worst[2]:
                    worst = (g, p, float(excess))
    ok = worst[2] <= WARDROP_TOL
    return SegmentReport(expected, ok, worst[0], worst[1], worst[2], state_costs)


@dataclass(frozen=True, eq=False)
class ExAnteReport:
    in_scheme: tuple  # per commodity
    opt_out: tuple
    best_path: tuple
    passed: bool

    @property
    def margin(self) -> float:
        return min(o - i for i, o in zip(self.in_scheme, self.opt_out))


def ex_ante_obedience_check(inst: RoutingInstance, scheme) -> ExAnteReport:
    """Opt-out test for a per-state recommended flow ``scheme[t][p]``.

    For each commodity, a uniformly random recommended unit pays the
    prior-averaged cost of its commodity divided by the demand; opting out
    means committing to one path at the scheme's aggregate flows.  Passes iff
    the in-scheme cost is at most the opt-out cost plus 1e-9.
    """
    flows = np.asarray(scheme, dtype=float)
    if flows.shape != (inst.n_states, inst.n_paths):
        raise RoutingError(f"scheme: expected shape {(inst.n_states, inst.n_paths)}, got {flows.shape}")
    if np.any(flows < -1e-12):
        raise RoutingError("scheme: negative path flow")
    for t in range(inst.n_states):
        for k, c in enumerate(inst.commodities):
            got = flows[t, inst.path_commodity == k].sum()
            if abs(got - c.demand) > 1e-9:
                raise RoutingError(f"scheme state {t}: commodity {k} routes {got}, demand is {c.demand}")
    pc = np.array([inst.path_costs(inst.edge_flows(flows[t]), t) for t in range(inst.n_states)])
    expected = inst.prior @ pc
    ins, outs, best = [], [], []
    for k, c in enumerate(inst.commodities):
        ps = inst.commodity_paths(k)
        paid = sum(inst.prior[t] * flows[t, p] * pc[t, p] for t in range(inst.n_states) for p in ps)
        ins.append(float(paid / c.demand) if c.demand > 0 else 0.0)
        p_best = min(ps, key=lambda p: (expected[p], p))
        outs.append(float(expected[p_best]))
        best.append(p_best)
    passed = all(i <= o + 1e-9 for i, o in zip(ins, outs))
    return ExAnteReport(tuple(ins), tuple(outs), tuple(best), passed)


# ---------------------------------------------------------------------------
# closed forms


def pigou_poa(alpha: float) -> float:
    """Price of anarchy of the Pigou network with latency ``x^α`` against a constant 1.

    With ``d = (1/(α+1))^{1/α}`` the optimum is ``d^{α+1} + 1 − d``, which is
    rewritten as ``1 − d·α/(α+1)`` for accuracy; ``α = 0`` gives the limit 1.
    """
    alpha = float(alpha)
    if not alpha >= 0 or math.isnan(alpha):
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0.0:
        return 1.0
    d = math.exp(-math.log1p(alpha) / alpha)
    return 1.0 / (1.0 - d * alpha / (alpha + 1.0))


def pigou_optimum(alpha: float) -> float:
    """Optimal cost ``d^{α+1} + 1 − d`` of the same network, ``d = (1/(α+1))^{1/α}``."""
    return 1.0 / pigou_poa(alpha)


def pigou_split(alpha: float) -> float:
    """Optimal flow ``(1/(α+1))^{1/α}`` on the ``x^α`` edge (``1/e`` limit at 0)."""
    alpha = float(alpha)
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0.0:
        return math.exp(-1.0)
    return math.exp(-math.log1p(alpha) / alpha)


def solve_pigou_alpha(r: float, tol: float = 1e-9) -> float:
    """Invert :func:`pigou_poa` by bisection on ``(0, 1e3]``."""
    r = float(r)
    if not r >= 1:
        raise ValueError(f"ratio must be >= 1, got {r}")
    if r == 1.0:
        return 0.0
    hi_val = pigou_poa(PIGOU_ALPHA_MAX)
    if r > hi_val:
        raise ValueError(f"ratio {r} exceeds pigou_poa({PIGOU_ALPHA_MAX:g}) = {hi_val:.6g}")
    lo, hi = 0.0, PIGOU_ALPHA_MAX
    mid = hi
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        val = pigou_poa(mid)
        if abs(val - r) <= tol:
            break
        if val < r:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return mid


def private_family_cost_fig3(alpha: float, x: float, y: float) -> float:
    """Expected cost of the two-parameter obedient private family on the four-edge network.

    ``x`` is the flow sent to the ``x^α`` edge at the first state and ``y``
    the same at the second; the remainder uses an ``(α+1)``-cost edge.
    """
    for name, v in (("x", x), ("y", y)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v}")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    a1 = alpha + 1.0
    return (xpow(x, a1) + a1 * (1.0 - x) + xpow(y, a1) + a1 * (1.0 - y)) / 2.0


__all__ = [
    "BeliefSegment",
    "Commodity",
    "ConvergenceError",
    "Edge",
    "ExAnteReport",
    "FlowProfile",
    "Latency",
    "RoutingError",
    "RoutingInstance",
    "RoutingPublicSearch",
    "SegmentReport",
    "SegmentedFlow",
    "evaluate_routing_public_scheme",
    "evaluate_segmented_flow",
    "ex_ante_obedience_check",
    "full_information_cost",
    "load_routing",
    "optimal_cost_floor",
    "optimal_flow",
    "optimal_public_cost",
    "pigou_optimum",
    "pigou_poa",
    "pigou_split",
    "private_family_cost_fig3",
    "routing_from_dict",
    "routing_from_json",
    "routing_poa",
    "solve_pigou_alpha",
    "wardrop_equilibrium",
    "xpow",
]
