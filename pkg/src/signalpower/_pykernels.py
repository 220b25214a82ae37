"""Pure-Python reference implementations of the numerical hot loops.

The compiled module ``_ckernels`` mirrors these functions signature for
signature.  The Python versions are also the only path used for exact
(``Fraction``) arithmetic, so they avoid float-only helpers.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

# simplex status codes shared with the compiled kernel
OPTIMAL = 0
UNBOUNDED = 1
NUMERIC = 2
ITERATION_LIMIT = 3


def _solve_dense(M, rhs, sing_tol):
    """Gaussian elimination with partial pivoting on small list matrices.

    Returns ``None`` when a pivot is at or below ``sing_tol`` in magnitude.
    """
    n = len(M)
    M = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(M[r][c]))
        if abs(M[piv][c]) <= sing_tol:
            return None
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
        pr = M[c]
        for r in range(c + 1, n):
            f = M[r][c] / pr[c]
            if f != 0:
                row = M[r]
                for k in range(c, n + 1):
                    row[k] -= f * pr[k]
    sol = [0] * n
    for r in range(n - 1, -1, -1):
        acc = M[r][n]
        for k in range(r + 1, n):
            acc -= M[r][k] * sol[k]
        sol[r] = acc / M[r][r]
    return sol


def _indifference(P, rows, cols, sing_tol):
    # mixture over `cols` making every row in `rows` of P earn the same value
    k = len(rows)
    M = [[P[i][j] for j in cols] + [-1] for i in rows]
    M.append([1] * k + [0])
    rhs = [0] * k + [1]
    return _solve_dense(M, rhs, sing_tol)


def support_enum_2p(A, B, tol, sing_tol):
    """Enumerate equal-size support pairs of a bimatrix game (both maximize).

    Returns ``(equilibria, n_singular)`` where every equilibrium is a pair
    of lists ``(x, y)``.  ``tol`` is the best-response slack; with exact
    arithmetic pass ``tol = sing_tol = 0``.
    """
    A = A.tolist() if isinstance(A, np.ndarray) else A
    B = B.tolist() if isinstance(B, np.ndarray) else B
    m, n = len(A), len(A[0])
    Bt = [[B[i][j] for i in range(m)] for j in range(n)]
    zero = A[0][0] * 0
    found = []
    n_singular = 0
    for k in range(1, min(m, n) + 1):
        for I in combinations(range(m), k):
            for J in combinations(range(n), k):
                ys = _indifference(A, I, J, sing_tol)
                if ys is None:
                    n_singular += 1
                    continue
                if any(v < -tol for v in ys[:k]):
                    continue
                xs = _indifference(Bt, J, I, sing_tol)
                if xs is None:
                    n_singular += 1
                    continue
                if any(v < -tol for v in xs[:k]):
                    continue
                x = [zero] * m
                y = [zero] * n
                for a, i in enumerate(I):
                    x[i] = xs[a] if xs[a] > 0 else zero
                for b, j in enumerate(J):
                    y[j] = ys[b] if ys[b] > 0 else zero
                v1, v2 = ys[k], xs[k]
                ok = True
                for i in range(m):
                    s = zero
                    for j in J:
                        s += A[i][j] * y[j]
                    if s > v1 + tol:
                        ok = False
                        break
                if ok:
                    for j in range(n):
                        s = zero
                        for i in I:
                            s += B[i][j] * x[i]
                        if s > v2 + tol:
                            ok = False
                            break
                if ok:
                    found.append((x, y))
    return found, n_singular


def simplex_iterate(T, basis, n_cols, opt_tol, pivot_tol, max_iter):
    """Run Bland-rule primal simplex pivots in place on a maximization tableau.

    ``T`` has one row per constraint plus the reduced-cost row last; the
    right-hand side is the final column.  Only the first ``n_cols`` columns
    may enter.  Returns ``(status, iterations)``.
    """
    m = T.shape[0] - 1
    rhs = T.shape[1] - 1
    it = 0
    while it < max_iter:
        obj = T[m]
        enter = -1
        for j in range(n_cols):
            if obj[j] < -opt_tol:
                enter = j
                break
        if enter < 0:
            return OPTIMAL, it
        # min-ratio test; near-ties go to the largest pivot, then Bland
        best = None
        tiny = False
        for i in range(m):
            a = T[i, enter]
            if a > pivot_tol:
                ratio = max(T[i, rhs], 0) / a  # drifted negatives count as zero
                if best is None or ratio < best:
                    best = ratio
            elif a > 0:
                tiny = True
        leave = -1
        if best is not None:
            slack = opt_tol * (1 + abs(best))
            for i in range(m):
                a = T[i, enter]
                if a > pivot_tol and max(T[i, rhs], 0) / a <= best + slack:
                    if (
                        leave < 0
                        or a > T[leave, enter]
                        or (a == T[leave, enter] and basis[i] < basis[leave])
                    ):
                        leave = i
        if leave < 0:
            return (NUMERIC if tiny else UNBOUNDED), it
        T[leave] = T[leave] / T[leave, enter]
        prow = T[leave]
        for i in range(m + 1):
            if i != leave:
                f = T[i, enter]
                if f != 0:
                    T[i] = T[i] - f * prow
        basis[leave] = enter
        it += 1
    return ITERATION_LIMIT, it


def _xpow(x, d):
    if x <= 0.0:
        return 1.0 if d == 0.0 else 0.0
    return math.pow(x, d)


def _edge_value(e, x, ptr, ta, td, const, mode):
    s = const[e] * x
    for t in range(ptr[e], ptr[e + 1]):
        d1 = td[t] + 1.0
        if mode == 0:
            s += ta[t] * _xpow(x, d1) / d1
        else:
            s += ta[t] * _xpow(x, d1)
    return s


def _edge_cost(e, x, ptr, ta, td, const, mode):
    s = const[e]
    for t in range(ptr[e], ptr[e + 1]):
        if mode == 0:
            s += ta[t] * _xpow(x, td[t])
        else:
            s += ta[t] * (td[t] + 1.0) * _xpow(x, td[t])
    return s


def fw_solve(
    edge_term_ptr,
    term_a,
    term_d,
    edge_const,
    path_ptr,
    path_edges,
    comm_ptr,
    demand,
    mode,
    rel_tol,
    max_iter,
    ls_tol,
):
    """Pairwise Frank-Wolfe on path flows with an exact bisection line search.

    ``mode`` 0 minimizes the Beckmann potential, 1 the total cost.
    Returns ``(path_flows, iterations, rel_gap, objective_history)``.
    """
    ptr = list(edge_term_ptr)
    ta = list(term_a)
    td = list(term_d)
    const = list(edge_const)
    pp = list(path_ptr)
    pe = list(path_edges)
    cp = list(comm_ptr)
    dem = list(demand)
    E = len(const)
    P = len(pp) - 1
    K = len(dem)
    flow = [0.0] * P
    x = [0.0] * E
    delta = [0] * E
    history = []

    def path_costs():
        ce = [_edge_cost(e, x[e], ptr, ta, td, const, mode) for e in range(E)]
        return [sum(ce[pe[t]] for t in range(pp[p], pp[p + 1])) for p in range(P)]

    def objective():
        return sum(_edge_value(e, x[e], ptr, ta, td, const, mode) for e in range(E))

    costs = path_costs()
    for k in range(K):
        q = min(range(cp[k], cp[k + 1]), key=lambda p: (costs[p], p))
        flow[q] = float(dem[k])
        for t in range(pp[q], pp[q + 1]):
            x[pe[t]] += flow[q]

    rel = 0.0
    it = 0
    while True:
        costs = path_costs()
        gap = 0.0
        total = 0.0
        for k in range(K):
            lo = cp[k]
            hi = cp[k + 1]
            if hi == lo:
                continue
            cmin = min(costs[lo:hi])
            for p in range(lo, hi):
                gap += flow[p] * (costs[p] - cmin)
                total += flow[p] * costs[p]
        rel = gap / total if total > 0.0 else 0.0
        history.append(objective())
        if rel <= rel_tol or it >= max_iter:
            break
        it += 1
        for k in range(K):
            lo = cp[k]
            hi = cp[k + 1]
            if hi - lo < 2:
                continue
            # sweep every used path into the cheapest one, one pair at a time
            for src in range(lo, hi):
                if flow[src] <= 0.0:
                    continue
                costs = path_costs()
                q = lo
                for p in range(lo, hi):
                    if costs[p] < costs[q] or (costs[p] == costs[q] and flow[p] > 0.0 and flow[q] <= 0.0):
                        q = p
                if q == src or costs[src] - costs[q] <= 0.0:
                    continue
                for t in range(pp[q], pp[q + 1]):
                    delta[pe[t]] += 1
                for t in range(pp[src], pp[src + 1]):
                    delta[pe[t]] -= 1
                touched = [e for e in range(E) if delta[e] != 0]

                def slope(g):
                    # directional derivative: cost of q minus cost of src at the trial point
                    return sum(
                        delta[e] * _edge_cost(e, x[e] + g * delta[e], ptr, ta, td, const, mode)
                        for e in touched
                    )

                gmax = flow[src]
                if slope(gmax) <= 0.0:
                    g = gmax
                else:
                    a, b = 0.0, gmax
                    while b - a > ls_tol:
                        m = 0.5 * (a + b)
                        if slope(m) > 0.0:
                            b = m
                        else:
                            a = m
                    g = 0.5 * (a + b)
                if g > 0.0:
                    flow[q] += g
                    flow[src] = 0.0 if g == gmax else flow[src] - g
                    for e in touched:
                        x[e] += g * delta[e]
                for e in touched:
                    delta[e] = 0
    return np.array(flow, dtype=float), it, rel, history
