"""Command-line front end.

Commands::

    signalpower run fig4 --alpha 0.5 --eps 0.1 --classes pub,pri
    signalpower run game.json --json --verify
    signalpower sweep fig1 --alpha 0.25:4:0.25 --out fig1.csv
    signalpower verify --seed 1 --count 200
    signalpower export-scenario fig5 --alpha 0.3 --eps 0.05

Machine formats (``--json``, ``--csv``) print numbers with 12 significant
digits and never include timings, so equal arguments give equal bytes.
Exit codes: 0 success, 1 input error, 2 bound violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

import numpy as np

from signalpower import equilibria, routing, scenarios, signaling
from signalpower.game import FiniteBayesianGame, game_from_dict, game_to_dict, game_to_json
from signalpower.routing import RoutingInstance, routing_from_dict

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BOUND = 2

_CLASS_NAMES = {c.lower(): c for c in signaling.CLASSES}
MAX_VERIFY_PLAYERS = 2
MAX_VERIFY_STATES = 3
MAX_VERIFY_ACTIONS = equilibria.MAX_ACTIONS_2P


class InputError(Exception):
    """Bad arguments or an unreadable instance."""


def fmt12(v) -> str:
    """Fixed 12-significant-digit rendering used by every machine format."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"


def _num12(v):
    s = fmt12(v)
    return s if s in ("nan", "inf", "-inf") else float(s)


def parse_classes(text: str | None, routing_file: bool = False) -> tuple:
    if not text:
        return ("FI", "NI", "Pub") if routing_file else signaling.CLASSES
    out = []
    for tok in text.split(","):
        key = tok.strip().lower()
        if key not in _CLASS_NAMES:
            raise InputError(f"unknown class {tok.strip()!r}; expected some of {','.join(signaling.CLASSES)}")
        if _CLASS_NAMES[key] not in out:
            out.append(_CLASS_NAMES[key])
    return tuple(sorted(out, key=signaling.CLASSES.index))


def parse_range(text: str, integer: bool = False) -> list:
    """``a:b:step`` (inclusive), ``a:b`` (step 1) or a single value."""
    parts = text.split(":")
    if len(parts) not in (1, 2, 3):
        raise InputError(f"bad range {text!r}; expected a, a:b or a:b:step")
    try:
        nums = [Decimal(p) for p in parts]
    except InvalidOperation:
        raise InputError(f"bad range {text!r}: not a number") from None
    if len(nums) == 1:
        vals = nums
    else:
        lo, hi = nums[0], nums[1]
        step = nums[2] if len(nums) == 3 else Decimal(1)
        if step <= 0:
            raise InputError(f"range {text!r}: step must be positive")
        if hi < lo:
            raise InputError(f"range {text!r} is empty")
        count = int((hi - lo) / step) + 1
        vals = [lo + k * step for k in range(count)]
    if integer:
        if any(v != v.to_integral_value() for v in vals):
            raise InputError(f"range {text!r}: expected integers")
        return [int(v) for v in vals]
    return [float(v) for v in vals]


# ---------------------------------------------------------------------------
# run


@dataclass
class RunReport:
    target: dict
    params: dict
    values: dict
    pos: list
    poa_max: object
    expected: dict = field(default_factory=dict)
    boundary: bool = False
    bound: signaling.BoundReport | None = None
    timings: dict = field(default_factory=dict)
    exact: bool = False

    @property
    def bound_ok(self) -> bool:
        return self.bound is None or self.bound.ok

    def to_dict(self) -> dict:
        out = {
            "target": self.target,
            "params": self.params,
            "values": {c: _num12(v) for c, v in self.values.items()},
            "pos": [
                {"pair": f"PoS({p.class_b}:{p.class_a})", "ratio": _num12(p.ratio), "flag": p.flag}
                for p in self.pos
            ],
            "poa_max": _num12(self.poa_max),
            "expected": {k: _num12(v) for k, v in self.expected.items()},
            "boundary": self.boundary,
        }
        if self.exact:
            out["exact_values"] = {c: str(v) for c, v in self.values.items() if isinstance(v, Fraction)}
        if self.bound is not None:
            out["verify"] = {
                "passed": self.bound.ok,
                "pair_violations": [f"PoS({p.class_b}:{p.class_a})" for p in self.bound.violations],
                "chain_violations": [list(c[:3]) for c in self.bound.chain_violations],
            }
        return out

    def csv_header(self) -> list:
        return list(self.params) + list(self.values) + [f"PoS({p.class_b}:{p.class_a})" for p in self.pos] + ["poa_max"]

    def csv_row(self) -> list:
        return (
            [fmt12(v) for v in self.params.values()]
            + [fmt12(v) for v in self.values.values()]
            + [fmt12(p.ratio) for p in self.pos]
            + [fmt12(self.poa_max)]
        )


def _load_instance(path: str, exact: bool):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if isinstance(data, dict) and "edges" in data:
        if exact:
            raise InputError("exact arithmetic is only available for finite games")
        return routing_from_dict(data)
    return game_from_dict(data, True if exact else None)


def pos_pairs(values: dict) -> list:
    """Every nested pair among the computed classes, in class order."""
    out = []
    names = [c for c in signaling.CLASSES if c in values]
    for a, b in itertools.combinations(names, 2):
        if signaling._RANK[a] < signaling._RANK[b]:
            out.append(signaling.pos_from_values(a, b, values[a], values[b]))
    return out


def _routing_file_values(inst: RoutingInstance, classes, grid: int) -> dict:
    out = {}
    for cls in classes:
        if cls == "FI":
            out[cls] = routing.full_information_cost(inst)
        elif cls == "NI":
            out[cls] = routing.wardrop_equilibrium(inst).cost
        elif cls == "Pub":
            out[cls] = routing.optimal_public_cost(inst, grid).value
        else:
            raise InputError(f"class {cls} is only available for routing scenarios with an exhibited scheme")
    return out


def run_report(
    target: str,
    params: dict | None = None,
    classes=None,
    grid: int = signaling.DEFAULT_GRID,
    exact: bool = False,
    verify: bool = False,
) -> RunReport:
    """Compute a report for a scenario id or an instance file path."""
    params = dict(params or {})
    timings = {}
    t0 = time.perf_counter()
    if target in scenarios.SCENARIOS:
        sc = scenarios.build(target, exact=exact, **params)
        timings["build"] = time.perf_counter() - t0
        classes = parse_classes(None) if classes is None else classes
        t0 = time.perf_counter()
        values = scenarios.compute_values(sc, classes, grid)
        timings["values"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        poa = scenarios.scenario_poa_max(sc)
        timings["poa"] = time.perf_counter() - t0
        maximize = not sc.is_routing and sc.instance.sense.maximize
        ident = {"scenario": target}
        params = sc.spec.params()
        expected, boundary = sc.expected, sc.boundary
    else:
        if params:
            raise InputError(f"{target!r} is not a scenario id; parameters apply to scenarios only")
        inst = _load_instance(target, exact)
        timings["build"] = time.perf_counter() - t0
        is_routing = isinstance(inst, RoutingInstance)
        classes = parse_classes(None, is_routing) if classes is None else classes
        t0 = time.perf_counter()
        if is_routing:
            values = _routing_file_values(inst, classes, grid)
        else:
            values = {c: signaling.class_value(inst, c, grid) for c in classes}
        timings["values"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        if is_routing:
            poa = max(routing.routing_poa(inst, t) for t in range(inst.n_states))
            maximize = False
        else:
            poa = equilibria.poa_max(inst)
            maximize = inst.sense.maximize
        timings["poa"] = time.perf_counter() - t0
        ident = {"instance": Path(target).name}
        expected, boundary = {}, False
    bound = None
    if verify:
        checked = {c: v for c, v in values.items() if c != "NI"}
        bound = signaling.bound_report(checked, float(poa), maximize)
    return RunReport(ident, params, values, pos_pairs(values), poa, dict(expected), boundary, bound, timings, exact)


def _human_run(rep: RunReport, show_timings: bool) -> str:
    lines = []
    name = rep.target.get("scenario") or rep.target.get("instance")
    par = " ".join(f"{k}={v:g}" for k, v in rep.params.items())
    lines.append(f"{name} {par}".rstrip() + (" [boundary]" if rep.boundary else ""))
    lines.append(f"{'class':<8}{'value':>16}{'expected':>16}")
    for c, v in rep.values.items():
        exp = rep.expected.get(c.lower())
        extra = f"  ({v})" if isinstance(v, Fraction) else ""
        lines.append(f"{c:<8}{float(v):>16.8g}{'' if exp is None else format(float(exp), '16.8g'):>16}{extra}")
    if rep.pos:
        lines.append("")
        for p in rep.pos:
            flag = "" if p.flag == "finite" else f"  [{p.flag}]"
            lines.append(f"{'PoS(' + p.class_b + ':' + p.class_a + ')':<14}{float(p.ratio):>14.8g}{flag}")
    lines.append(f"{'poa_max':<14}{float(rep.poa_max):>14.8g}")
    if rep.bound is not None:
        lines.append("verify: " + ("pass" if rep.bound.ok else "FAIL"))
        for p in rep.bound.violations:
            lines.append(f"  bound violated by PoS({p.class_b}:{p.class_a}) = {float(p.ratio):.12g}")
        for i, j, k, lhs, rhs, _ in rep.bound.chain_violations:
            lines.append(f"  chain violated: PoS({j}:{i}) = {lhs:.12g} vs PoS({k}:{i}) = {rhs:.12g}")
    if show_timings:
        lines.append("timings: " + " ".join(f"{k}={v * 1e3:.1f}ms" for k, v in rep.timings.items()))
    return "\n".join(lines) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _scenario_params(args) -> dict:
    out = {}
    for name in ("alpha", "eps", "n"):
        v = getattr(args, name, None)
        if v is not None:
            out[name] = v
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    target = args.target
    if target not in scenarios.SCENARIOS and not Path(target).exists():
        raise InputError(f"unknown scenario {target!r} (and no such file); scenarios: {', '.join(scenarios.SCENARIOS)}")
    classes = parse_classes(args.classes) if args.classes else None
    rep = run_report(target, _scenario_params(args), classes, args.grid, args.exact, args.verify)
    if args.json:
        text = json.dumps(rep.to_dict(), indent=2) + "\n"
    elif args.csv:
        text = _csv_text(rep.csv_header(), [rep.csv_row()])
    else:
        text = _human_run(rep, args.timings)
    _emit(text, args.out)
    return EXIT_OK if rep.bound_ok else EXIT_BOUND


# ---------------------------------------------------------------------------
# sweep


def _sweep_point(job):
    sid, params, classes, grid, exact = job
    rep = run_report(sid, params, classes, grid, exact)
    return rep.csv_header(), rep.csv_row(), rep.to_dict()


def _map(fn, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def cmd_sweep(args) -> int:
    sid = args.scenario
    if sid not in scenarios.SCENARIOS:
        raise InputError(f"unknown scenario {sid!r}; expected one of {', '.join(scenarios.SCENARIOS)}")
    names = list(scenarios.DEFAULTS[sid])
    axes = []
    for name in names:
        text = getattr(args, name)
        axes.append(parse_range(text, name == "n") if text is not None else [None])
    points = [{k: v for k, v in zip(names, combo) if v is not None} for combo in itertools.product(*axes)]
    for p in points:  # fail fast on the domain before any solving
        scenarios.build(sid, exact=args.exact, **p)
    classes = parse_classes(args.classes)
    t0 = time.perf_counter()
    results = _map(_sweep_point, [(sid, p, classes, args.grid, args.exact) for p in points], args.jobs)
    elapsed = time.perf_counter() - t0
    if args.json:
        text = json.dumps([r[2] for r in results], indent=2) + "\n"
    else:
        text = _csv_text(results[0][0], [r[1] for r in results])
    _emit(text, args.out)
    if args.timings:
        print(f"{len(points)} points in {elapsed:.2f}s", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def random_game(seed: int, index: int, players: int, states: int, actions: int) -> FiniteBayesianGame:
    """The ``index``-th random game of a seeded batch.

    Sizes are drawn uniformly up to the caps, payoffs uniformly from [0, 1]
    and the prior from the flat Dirichlet; even indices are payoff games,
    odd indices cost games.
    """
    rng = np.random.default_rng([seed, index])
    n = int(rng.integers(1, players + 1))
    k = int(rng.integers(1, states + 1))
    counts = tuple(int(c) for c in rng.integers(1, actions + 1, size=n))
    prior = rng.dirichlet(np.ones(k))
    payoff = rng.uniform(0.0, 1.0, size=(k,) + counts + (n,))
    sense = "payoff" if index % 2 == 0 else "cost"
    return FiniteBayesianGame.from_arrays(payoff, prior, sense)


def _verify_one(job):
    seed, index, players, states, actions, grid = job
    g = random_game(seed, index, players, states, actions)
    try:
        rep = signaling.verify_pos_bound(g, grid)
    except Exception as exc:  # surfaced as a finding, never swallowed
        return {"index": index, "kind": "error", "message": f"{type(exc).__name__}: {exc}", "instance": game_to_dict(g)}
    if rep.ok:
        return None
    return {
        "index": index,
        "kind": "violation",
        "sense": g.sense.value,
        "poa_max": _num12(rep.poa_max),
        "values": {c: _num12(v) for c, v in rep.values.items()},
        "pair_violations": [
            {"pair": f"PoS({p.class_b}:{p.class_a})", "ratio": _num12(p.ratio)} for p in rep.violations
        ],
        "chain_violations": [
            {"triple": list(c[:3]), "lhs": _num12(c[3]), "rhs": _num12(c[4])} for c in rep.chain_violations
        ],
        "instance": game_to_dict(g),
    }


def verify_batch(seed: int, count: int, players: int, states: int, actions: int, grid: int, jobs: int = 1) -> dict:
    if count < 0:
        raise InputError("count must be non-negative")
    if not 1 <= players <= MAX_VERIFY_PLAYERS:
        raise InputError(f"players cap must be in 1..{MAX_VERIFY_PLAYERS}")
    if not 1 <= states <= MAX_VERIFY_STATES:
        raise InputError(f"states cap must be in 1..{MAX_VERIFY_STATES}")
    if not 1 <= actions <= MAX_VERIFY_ACTIONS:
        raise InputError(f"actions cap must be in 1..{MAX_VERIFY_ACTIONS}")
    found = _map(_verify_one, [(seed, k, players, states, actions, grid) for k in range(count)], jobs)
    findings = [f for f in found if f is not None]
    return {
        "seed": seed,
        "count": count,
        "caps": {"players": players, "states": states, "actions": actions},
        "grid": grid,
        "violations": sum(f["kind"] == "violation" for f in findings),
        "errors": sum(f["kind"] == "error" for f in findings),
        "findings": findings,
    }


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    summary = verify_batch(args.seed, args.count, args.players, args.states, args.actions, args.grid, args.jobs)
    elapsed = time.perf_counter() - t0
    if args.json:
        text = json.dumps(summary, indent=2) + "\n"
    else:
        lines = [
            f"seed {summary['seed']}  count {summary['count']}  caps "
            f"{args.players}p x {args.states}s x {args.actions}a",
            f"violations {summary['violations']}  errors {summary['errors']}",
        ]
        for f in summary["findings"]:
            lines.append(f"--- game {f['index']} ({f['kind']})")
            if f["kind"] == "error":
                lines.append(f["message"])
            else:
                for v in f["pair_violations"]:
                    lines.append(f"{v['pair']} = {v['ratio']} vs poa_max {f['poa_max']}")
                for c in f["chain_violations"]:
                    lines.append(f"chain {c['triple']}: {c['lhs']} vs {c['rhs']}")
            lines.append(json.dumps(f["instance"]))
        if args.timings:
            lines.append(f"elapsed {elapsed:.2f}s")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_BOUND if summary["findings"] else EXIT_OK


# ---------------------------------------------------------------------------
# export


def cmd_export(args) -> int:
    sid = args.scenario
    if sid not in scenarios.SCENARIOS:
        raise InputError(f"unknown scenario {sid!r}; expected one of {', '.join(scenarios.SCENARIOS)}")
    sc = scenarios.build(sid, exact=args.exact, **_scenario_params(args))
    inst = sc.instance
    text = (inst.to_json(indent=2) if sc.is_routing else game_to_json(inst, indent=2)) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_params(p, ranges: bool = False) -> None:
    kind = str if ranges else float
    p.add_argument("--alpha", type=kind, help="alpha" + (" (a:b:step)" if ranges else ""))
    p.add_argument("--eps", type=kind, help="epsilon" + (" (a:b:step)" if ranges else ""))
    p.add_argument("--n", type=str if ranges else int, help="number of states/actions (appA)")


def _add_format(p, csv_ok: bool = True) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON output")
    if csv_ok:
        g.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--out", help="write to this path instead of stdout")
    p.add_argument("--timings", action="store_true", help="report wall-clock times (human output only)")


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1); 2 is reserved for bound violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="signalpower", description="Power of signaling and price of anarchy calculator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="class values and PoS ratios for a scenario or instance file")
    p.add_argument("target", help=f"scenario id ({', '.join(scenarios.SCENARIOS)}) or instance JSON path")
    _add_params(p)
    p.add_argument("--classes", help="comma-separated subset of fi,ni,pub,pri,exp")
    p.add_argument("--grid", type=int, default=signaling.DEFAULT_GRID, help="posterior grid steps for Pub")
    p.add_argument("--exact", action="store_true", help="rational arithmetic (finite games)")
    p.add_argument("--verify", action="store_true", help="check the PoS bound; exit 2 on violation")
    _add_format(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="CSV of a scenario over parameter ranges")
    p.add_argument("scenario")
    _add_params(p, ranges=True)
    p.add_argument("--classes")
    p.add_argument("--grid", type=int, default=signaling.DEFAULT_GRID)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true")
    g.add_argument("--csv", action="store_true", help="CSV output (default)")
    p.add_argument("--out")
    p.add_argument("--timings", action="store_true", help="print elapsed time to stderr")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check the PoS bound on seeded random games")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--players", type=int, default=2, help="cap on players")
    p.add_argument("--states", type=int, default=2, help="cap on states")
    p.add_argument("--actions", type=int, default=3, help="cap on actions per player")
    p.add_argument("--grid", type=int, default=signaling.DEFAULT_GRID)
    p.add_argument("--jobs", type=int, default=1)
    _add_format(p, csv_ok=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-scenario", help="write a scenario instance as JSON")
    p.add_argument("scenario")
    _add_params(p)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, LookupError, routing.RoutingError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
