"""Time the compiled and pure-Python kernel backends on the same inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from signalpower import kernels, routing
from signalpower.scenarios import build


def _bimatrix_cases(count=40, size=4):
    rng = np.random.default_rng(0)
    return [(rng.uniform(size=(size, size)), rng.uniform(size=(size, size))) for _ in range(count)]


def _simplex_cases(count=40, m=12, n=12):
    rng = np.random.default_rng(1)
    out = []
    for _ in range(count):
        T = np.zeros((m + 1, n + m + 1))
        T[:m, :n] = rng.uniform(-1, 2, size=(m, n))
        T[:m, n : n + m] = np.eye(m)
        T[:m, -1] = rng.uniform(0.1, 3, size=m)
        T[m, :n] = -rng.uniform(-1, 2, size=n)
        out.append((T, np.arange(n, n + m, dtype=np.intp)))
    return out


def _routing_cases():
    return [build(sid, alpha=a).instance for sid in ("fig1", "fig2", "fig3") for a in (0.5, 2.0)]


def workloads(mod):
    bim = _bimatrix_cases()
    lps = _simplex_cases()
    nets = _routing_cases()
    belief = np.array([0.3, 0.7])

    def support_enum():
        for A, B in bim:
            mod.support_enum_2p(A, B, 1e-10, 1e-12)

    def simplex():
        for T, basis in lps:
            mod.simplex_iterate(T.copy(), basis.copy(), T.shape[1] - 1, 1e-9, 1e-9, 10_000)

    def frank_wolfe():
        for inst in nets:
            routing._frank_wolfe(inst, belief, 0, backend=mod)

    return {"support_enum_2p": support_enum, "simplex_iterate": simplex, "fw_solve": frank_wolfe}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = {"python": kernels.get_backend("python")}
    try:
        backends["cython"] = kernels.get_backend("cython")
    except ImportError:
        print("compiled backend not built; timing the Python fallback only")
    times = {}
    for name, mod in backends.items():
        for job, fn in workloads(mod).items():
            times[job, name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
    print(f"{'kernel':<18}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}")
    for job in ("support_enum_2p", "simplex_iterate", "fw_solve"):
        py = times[job, "python"]
        cy = times.get((job, "cython"))
        tail = f"{cy:>12.4f}{py / cy:>9.1f}x" if cy else f"{'-':>12}{'-':>10}"
        print(f"{job:<18}{py:>12.4f}{tail}")


if __name__ == "__main__":
    main()
