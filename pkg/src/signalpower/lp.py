"""Dense two-phase tableau simplex with Bland's rule.

Problems here are tiny (a few hundred variables at most), so the tableau is
kept dense and auditable.  Pass ``exact=True`` to run the same pivots over
``Fraction`` values for bit-exact regression values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from signalpower import _pykernels, kernels

OPT_TOL = 1e-10
PIVOT_TOL = 1e-9
FEAS_TOL = 1e-9
RESIDUAL_TOL = 1e-7

SENSES = ("<=", "=", ">=")


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LpNumericalError(ArithmeticError):
    """The pivoting ran into a near-zero pivot or failed its residual check."""


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``max`` or ``min`` of ``objective @ x`` s.t. ``A x (<=|=|>=) rhs``, ``x >= 0``."""

    objective: np.ndarray
    A: np.ndarray
    senses: tuple
    rhs: np.ndarray
    sense: str = "max"

    def __post_init__(self):
        exact = any(
            isinstance(v, Fraction)
            for arr in (self.objective, self.A, self.rhs)
            for v in np.asarray(arr, dtype=object).ravel()
        )
        dtype = object if exact else float
        c = np.asarray(self.objective, dtype=dtype).reshape(-1)
        A = np.asarray(self.A, dtype=dtype)
        if A.size == 0:
            A = A.reshape(0, c.size)
        b = np.asarray(self.rhs, dtype=dtype).reshape(-1)
        if A.ndim != 2 or A.shape[1] != c.size:
            raise ValueError(f"constraint matrix shape {A.shape} does not match {c.size} variables")
        if b.size != A.shape[0] or len(self.senses) != A.shape[0]:
            raise ValueError(f"{A.shape[0]} rows but {b.size} right-hand sides and {len(self.senses)} senses")
        for k, s in enumerate(self.senses):
            if s not in SENSES:
                raise ValueError(f"row {k}: unknown constraint sense {s!r}")
        if self.sense not in ("max", "min"):
            raise ValueError(f"objective sense must be 'max' or 'min', got {self.sense!r}")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "senses", tuple(self.senses))

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def as_exact(self) -> "LinearProgram":
        def conv(arr):
            out = np.empty(arr.shape, dtype=object)
            for idx, v in np.ndenumerate(arr):
                out[idx] = v if isinstance(v, Fraction) else Fraction(str(v))
            return out

        return LinearProgram(conv(self.objective), conv(self.A), self.senses, conv(self.rhs), self.sense)

    def max_violation(self, x: np.ndarray):
        """Largest constraint or bound violation at ``x``."""
        ax = self.A @ x
        worst = max([0] + [-v for v in x])
        for k, s in enumerate(self.senses):
            d = ax[k] - self.rhs[k]
            if s == "<=":
                worst = max(worst, d)
            elif s == ">=":
                worst = max(worst, -d)
            else:
                worst = max(worst, abs(d))
        return worst


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: LpStatus
    value: object = None
    point: np.ndarray | None = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def _run(T, basis, n_cols, exact, max_iter):
    if exact:
        return _pykernels.simplex_iterate(T, basis, n_cols, 0, 0, max_iter)
    return kernels.simplex_iterate(T, basis, n_cols, OPT_TOL, PIVOT_TOL, max_iter)


def _check(status, phase):
    if status == kernels.NUMERIC:
        raise LpNumericalError(f"phase {phase}: only pivots below {PIVOT_TOL:g} available")
    if status == kernels.ITERATION_LIMIT:
        raise LpNumericalError(f"phase {phase}: iteration limit reached")


def solve(lp: LinearProgram, exact: bool = False, max_iter: int = 100_000) -> LpSolution:
    """Solve ``lp`` by two-phase primal simplex with Bland's anti-cycling rule.

    Infeasible and unbounded problems are reported through the status;
    numerical trouble raises ``LpNumericalError``.
    """
    if exact and lp.objective.dtype != object:
        lp = lp.as_exact()
    exact = lp.objective.dtype == object
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    c = lp.objective if lp.sense == "max" else -lp.objective
    m, n = lp.A.shape
    A = lp.A.copy()
    b = lp.rhs.copy()
    senses = list(lp.senses)
    for i in range(m):
        if b[i] < 0:
            A[i] = -A[i]
            b[i] = -b[i]
            senses[i] = {"<=": ">=", ">=": "<=", "=": "="}[senses[i]]
    n_slack = sum(s != "=" for s in senses)
    art_rows = [i for i in range(m) if senses[i] != "<="]
    n_art = len(art_rows)
    width = n + n_slack + n_art
    dtype = object if exact else float
    T = np.empty((m + 1, width + 1), dtype=dtype)
    T[:] = zero
    T[:m, :n] = A
    T[:m, width] = b
    basis = np.zeros(m, dtype=np.intp)
    col = n
    art = n + n_slack
    for i in range(m):
        if senses[i] == "<=":
            T[i, col] = one
            basis[i] = col
            col += 1
        else:
            if senses[i] == ">=":
                T[i, col] = -one
                col += 1
            T[i, art] = one
            basis[i] = art
            art += 1
    n_real = n + n_slack
    iterations = 0

    if n_art:
        # phase 1: maximize -(sum of artificials)
        for i in art_rows:
            T[m] = T[m] - T[i]
        T[m, n_real:width] = zero
        if not exact:
            T = np.ascontiguousarray(T)
        status, it = _run(T, basis, n_real, exact, max_iter)
        iterations += it
        _check(status, 1)
        scale = max([one] + [abs(v) for v in b])
        if -T[m, width] > (0 if exact else FEAS_TOL * scale):
            return LpSolution(LpStatus.INFEASIBLE, iterations=iterations)
        keep = []
        for i in range(m):
            if basis[i] >= n_real:
                j = next((j for j in range(n_real) if abs(T[i, j]) > (0 if exact else PIVOT_TOL)), None)
                if j is None:
                    continue  # redundant equality row
                T[i] = T[i] / T[i, j]
                for r in range(m + 1):
                    if r != i and T[r, j] != 0:
                        T[r] = T[r] - T[r, j] * T[i]
                basis[i] = j
            keep.append(i)
        T = np.concatenate([T[keep], T[m:m + 1]])
        T = np.delete(T, np.s_[n_real:width], axis=1)
        basis = basis[keep].copy()
        m = len(keep)

    # phase 2 reduced costs: c_B B^-1 A - c
    cfull = np.empty(n_real, dtype=dtype)
    cfull[:] = zero
    cfull[:n] = c
    T[m] = zero
    T[m, :n_real] = -cfull
    for i in range(m):
        cb = cfull[basis[i]]
        if cb != 0:
            T[m] = T[m] + cb * T[i]
    if not exact:
        T = np.ascontiguousarray(T, dtype=float)
    status, it = _run(T, basis, n_real, exact, max_iter)
    iterations += it
    _check(status, 2)
    if status == kernels.UNBOUNDED:
        return LpSolution(LpStatus.UNBOUNDED, iterations=iterations)

    x = np.empty(n, dtype=dtype)
    x[:] = zero
    for i in range(m):
        if basis[i] < n:
            v = T[i, -1]
            x[basis[i]] = v if (exact or v > 0) else 0.0
    viol = lp.max_violation(x)
    if viol > (0 if exact else RESIDUAL_TOL):
        raise LpNumericalError(f"returned point violates a constraint by {float(viol):.3g}")
    value = lp.objective @ x
    return LpSolution(LpStatus.OPTIMAL, value, x, iterations)


def linear_program(
    objective: Sequence,
    rows: Sequence[tuple],
    sense: str = "max",
) -> LinearProgram:
    """Convenience builder from ``(coefficients, sense, rhs)`` row triples."""
    rows = list(rows)
    A = [r[0] for r in rows] if rows else np.zeros((0, len(objective)))
    return LinearProgram(objective, A, tuple(r[1] for r in rows), [r[2] for r in rows], sense)
