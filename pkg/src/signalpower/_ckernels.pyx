# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_pykernels`` (float64 only)."""

import numpy as np
from libc.math cimport pow, fabs

cdef enum:
    MAXN = 8

cdef int OPTIMAL = 0
cdef int UNBOUNDED = 1
cdef int NUMERIC = 2
cdef int ITERATION_LIMIT = 3


cdef bint _solve_dense(double* M, int n, double sing_tol, double* out) noexcept nogil:
    # M is n x (n+1), row-major, augmented with the right-hand side
    cdef int c, r, k, piv
    cdef double best, f, tmp, acc
    for c in range(n):
        piv = c
        best = fabs(M[c * (n + 1) + c])
        for r in range(c + 1, n):
            if fabs(M[r * (n + 1) + c]) > best:
                best = fabs(M[r * (n + 1) + c])
                piv = r
        if best <= sing_tol:
            return False
        if piv != c:
            for k in range(n + 1):
                tmp = M[c * (n + 1) + k]
                M[c * (n + 1) + k] = M[piv * (n + 1) + k]
                M[piv * (n + 1) + k] = tmp
        for r in range(c + 1, n):
            f = M[r * (n + 1) + c] / M[c * (n + 1) + c]
            if f != 0.0:
                for k in range(c, n + 1):
                    M[r * (n + 1) + k] -= f * M[c * (n + 1) + k]
    for r in range(n - 1, -1, -1):
        acc = M[r * (n + 1) + n]
        for k in range(r + 1, n):
            acc -= M[r * (n + 1) + k] * out[k]
        out[r] = acc / M[r * (n + 1) + r]
    return True


cdef bint _indifference(const double[:, ::1] P, bint transpose, int* rows, int* cols,
                        int k, double sing_tol, double* out) noexcept nogil:
    cdef double M[(MAXN + 1) * (MAXN + 2)]
    cdef int a, b, w = k + 2
    for a in range(k):
        for b in range(k):
            if transpose:
                M[a * w + b] = P[cols[b], rows[a]]
            else:
                M[a * w + b] = P[rows[a], cols[b]]
        M[a * w + k] = -1.0
        M[a * w + k + 1] = 0.0
    for b in range(k):
        M[k * w + b] = 1.0
    M[k * w + k] = 0.0
    M[k * w + k + 1] = 1.0
    return _solve_dense(M, k + 1, sing_tol, out)


cdef bint _next_combination(int* c, int k, int n) noexcept nogil:
    cdef int i = k - 1, j
    while i >= 0 and c[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    c[i] += 1
    for j in range(i + 1, k):
        c[j] = c[j - 1] + 1
    return True


def support_enum_2p(const double[:, ::1] A, const double[:, ::1] B, double tol, double sing_tol):
    """Equal-size support enumeration; see ``_pykernels.support_enum_2p``."""
    cdef int m = A.shape[0], n = A.shape[1]
    if m > MAXN or n > MAXN:
        raise ValueError("support enumeration kernel limited to %d actions" % MAXN)
    cdef int I[MAXN]
    cdef int J[MAXN]
    cdef double ys[MAXN + 1]
    cdef double xs[MAXN + 1]
    cdef double x[MAXN]
    cdef double y[MAXN]
    cdef int k, a, i, j, n_singular = 0
    cdef bint ok, more_i, more_j
    cdef double s
    found = []
    for k in range(1, min(m, n) + 1):
        for a in range(k):
            I[a] = a
        more_i = True
        while more_i:
            for a in range(k):
                J[a] = a
            more_j = True
            while more_j:
                ok = True
                if not _indifference(A, False, I, J, k, sing_tol, ys):
                    n_singular += 1
                    ok = False
                if ok:
                    for a in range(k):
                        if ys[a] < -tol:
                            ok = False
                            break
                if ok:
                    if not _indifference(B, True, J, I, k, sing_tol, xs):
                        n_singular += 1
                        ok = False
                if ok:
                    for a in range(k):
                        if xs[a] < -tol:
                            ok = False
                            break
                if ok:
                    for i in range(m):
                        x[i] = 0.0
                    for j in range(n):
                        y[j] = 0.0
                    for a in range(k):
                        x[I[a]] = xs[a] if xs[a] > 0.0 else 0.0
                        y[J[a]] = ys[a] if ys[a] > 0.0 else 0.0
                    for i in range(m):
                        s = 0.0
                        for a in range(k):
                            s += A[i, J[a]] * y[J[a]]
                        if s > ys[k] + tol:
                            ok = False
                            break
                if ok:
                    for j in range(n):
                        s = 0.0
                        for a in range(k):
                            s += B[I[a], j] * x[I[a]]
                        if s > xs[k] + tol:
                            ok = False
                            break
                if ok:
                    found.append(([x[i] for i in range(m)], [y[j] for j in range(n)]))
                more_j = _next_combination(J, k, n)
            more_i = _next_combination(I, k, m)
    return found, n_singular


def simplex_iterate(double[:, ::1] T, Py_ssize_t[::1] basis, int n_cols,
                    double opt_tol, double pivot_tol, int max_iter):
    """Bland-rule pivots in place; see ``_pykernels.simplex_iterate``."""
    cdef int m = T.shape[0] - 1
    cdef int rhs = T.shape[1] - 1
    cdef int it = 0, j, i, enter, leave, c
    cdef double a, ratio, best = 0.0, f, piv, slack
    cdef bint tiny, found
    with nogil:
        while it < max_iter:
            enter = -1
            for j in range(n_cols):
                if T[m, j] < -opt_tol:
                    enter = j
                    break
            if enter < 0:
                with gil:
                    return OPTIMAL, it
            # min-ratio test; near-ties go to the largest pivot, then Bland
            found = False
            tiny = False
            for i in range(m):
                a = T[i, enter]
                if a > pivot_tol:
                    ratio = max(T[i, rhs], 0.0) / a  # drifted negatives count as zero
                    if not found or ratio < best:
                        best = ratio
                        found = True
                elif a > 0.0:
                    tiny = True
            leave = -1
            if found:
                slack = opt_tol * (1.0 + fabs(best))
                for i in range(m):
                    a = T[i, enter]
                    if a > pivot_tol and max(T[i, rhs], 0.0) / a <= best + slack:
                        if leave < 0 or a > T[leave, enter] or (a == T[leave, enter] and basis[i] < basis[leave]):
                            leave = i
            if leave < 0:
                with gil:
                    return (NUMERIC if tiny else UNBOUNDED), it
            piv = T[leave, enter]
            for c in range(rhs + 1):
                T[leave, c] = T[leave, c] / piv
            for i in range(m + 1):
                if i != leave:
                    f = T[i, enter]
                    if f != 0.0:
                        for c in range(rhs + 1):
                            T[i, c] = T[i, c] - f * T[leave, c]
            basis[leave] = enter
            it += 1
    return ITERATION_LIMIT, it


cdef inline double _xpow(double x, double d) noexcept nogil:
    if x <= 0.0:
        return 1.0 if d == 0.0 else 0.0
    return pow(x, d)


cdef double _edge_value(int e, double x, const Py_ssize_t[::1] ptr, const double[::1] ta,
                        const double[::1] td, const double[::1] const_, int mode) noexcept nogil:
    cdef double s = const_[e] * x, d1
    cdef Py_ssize_t t
    for t in range(ptr[e], ptr[e + 1]):
        d1 = td[t] + 1.0
        if mode == 0:
            s += ta[t] * _xpow(x, d1) / d1
        else:
            s += ta[t] * _xpow(x, d1)
    return s


cdef double _edge_cost(int e, double x, const Py_ssize_t[::1] ptr, const double[::1] ta,
                       const double[::1] td, const double[::1] const_, int mode) noexcept nogil:
    cdef double s = const_[e]
    cdef Py_ssize_t t
    for t in range(ptr[e], ptr[e + 1]):
        if mode == 0:
            s += ta[t] * _xpow(x, td[t])
        else:
            s += ta[t] * (td[t] + 1.0) * _xpow(x, td[t])
    return s


cdef void _path_costs(double[::1] x, double[::1] ce, double[::1] costs,
                      const Py_ssize_t[::1] ptr, const double[::1] ta, const double[::1] td,
                      const double[::1] const_, const Py_ssize_t[::1] pp,
                      const Py_ssize_t[::1] pe, int mode) noexcept nogil:
    cdef Py_ssize_t e, p, t
    for e in range(ce.shape[0]):
        ce[e] = _edge_cost(e, x[e], ptr, ta, td, const_, mode)
    for p in range(costs.shape[0]):
        costs[p] = 0.0
        for t in range(pp[p], pp[p + 1]):
            costs[p] += ce[pe[t]]


cdef double _slope(double g, double[::1] x, long[::1] delta, Py_ssize_t[::1] touched, int nt,
                   const Py_ssize_t[::1] ptr, const double[::1] ta, const double[::1] td,
                   const double[::1] const_, int mode) noexcept nogil:
    cdef double s = 0.0
    cdef int i
    cdef Py_ssize_t e
    for i in range(nt):
        e = touched[i]
        s += delta[e] * _edge_cost(e, x[e] + g * delta[e], ptr, ta, td, const_, mode)
    return s


def fw_solve(const Py_ssize_t[::1] edge_term_ptr, const double[::1] term_a,
             const double[::1] term_d, const double[::1] edge_const,
             const Py_ssize_t[::1] path_ptr, const Py_ssize_t[::1] path_edges,
             const Py_ssize_t[::1] comm_ptr, const double[::1] demand,
             int mode, double rel_tol, int max_iter, double ls_tol):
    """Pairwise Frank-Wolfe; see ``_pykernels.fw_solve``."""
    cdef Py_ssize_t E = edge_const.shape[0]
    cdef Py_ssize_t P = path_ptr.shape[0] - 1
    cdef Py_ssize_t K = demand.shape[0]
    flow_arr = np.zeros(P, dtype=np.float64)
    x_arr = np.zeros(E, dtype=np.float64)
    ce_arr = np.zeros(E, dtype=np.float64)
    costs_arr = np.zeros(P, dtype=np.float64)
    delta_arr = np.zeros(E, dtype=np.int_)
    touched_arr = np.zeros(E, dtype=np.intp)
    cdef double[::1] flow = flow_arr
    cdef double[::1] x = x_arr
    cdef double[::1] ce = ce_arr
    cdef double[::1] costs = costs_arr
    cdef long[::1] delta = delta_arr
    cdef Py_ssize_t[::1] touched = touched_arr
    cdef Py_ssize_t k, p, q, src, t, e, lo, hi
    cdef int it = 0, nt
    cdef double gap, total, cmin, rel = 0.0, obj
    cdef double a, b, c, g, gmax
    history = []

    _path_costs(x, ce, costs, edge_term_ptr, term_a, term_d, edge_const, path_ptr, path_edges, mode)
    for k in range(K):
        lo = comm_ptr[k]
        hi = comm_ptr[k + 1]
        if hi == lo:
            continue
        q = lo
        for p in range(lo, hi):
            if costs[p] < costs[q]:
                q = p
        flow[q] = demand[k]
        for t in range(path_ptr[q], path_ptr[q + 1]):
            x[path_edges[t]] += flow[q]

    while True:
        with nogil:
            _path_costs(x, ce, costs, edge_term_ptr, term_a, term_d, edge_const, path_ptr, path_edges, mode)
            gap = 0.0
            total = 0.0
            for k in range(K):
                lo = comm_ptr[k]
                hi = comm_ptr[k + 1]
                if hi == lo:
                    continue
                cmin = costs[lo]
                for p in range(lo, hi):
                    if costs[p] < cmin:
                        cmin = costs[p]
                for p in range(lo, hi):
                    gap += flow[p] * (costs[p] - cmin)
                    total += flow[p] * costs[p]
            rel = gap / total if total > 0.0 else 0.0
            obj = 0.0
            for e in range(E):
                obj += _edge_value(e, x[e], edge_term_ptr, term_a, term_d, edge_const, mode)
        history.append(obj)
        if rel <= rel_tol or it >= max_iter:
            break
        it += 1
        with nogil:
            for k in range(K):
                lo = comm_ptr[k]
                hi = comm_ptr[k + 1]
                if hi - lo < 2:
                    continue
                for src in range(lo, hi):
                    if flow[src] <= 0.0:
                        continue
                    _path_costs(x, ce, costs, edge_term_ptr, term_a, term_d, edge_const, path_ptr, path_edges, mode)
                    q = lo
                    for p in range(lo, hi):
                        if costs[p] < costs[q] or (costs[p] == costs[q] and flow[p] > 0.0 and flow[q] <= 0.0):
                            q = p
                    if q == src or costs[src] - costs[q] <= 0.0:
                        continue
                    for t in range(path_ptr[q], path_ptr[q + 1]):
                        delta[path_edges[t]] += 1
                    for t in range(path_ptr[src], path_ptr[src + 1]):
                        delta[path_edges[t]] -= 1
                    nt = 0
                    for e in range(E):
                        if delta[e] != 0:
                            touched[nt] = e
                            nt += 1
                    gmax = flow[src]
                    if _slope(gmax, x, delta, touched, nt, edge_term_ptr, term_a, term_d, edge_const, mode) <= 0.0:
                        g = gmax
                    else:
                        a = 0.0
                        b = gmax
                        while b - a > ls_tol:
                            c = 0.5 * (a + b)
                            if _slope(c, x, delta, touched, nt, edge_term_ptr, term_a, term_d, edge_const, mode) > 0.0:
                                b = c
                            else:
                                a = c
                        g = 0.5 * (a + b)
                    if g > 0.0:
                        flow[q] += g
                        if g == gmax:
                            flow[src] = 0.0
                        else:
                            flow[src] -= g
                        for t in range(nt):
                            e = touched[t]
                            x[e] += g * delta[e]
                    for t in range(nt):
                        delta[touched[t]] = 0
    return flow_arr, it, rel, history
