"""Compare the compiled kernel backend against the pure-numpy fallback.

Run as: python3 benchmarks/bench_kernels.py [--items N] [--repeats R]

Times the three hot kernels on workloads shaped like the real call sites
(LP pivoting on dense tableaus, batched wedge-panel quadrature, brute-force
closest-pair search) and prints one table row per kernel with the speedup.
"""

import argparse
import math
import time

import numpy as np

from avcsym._kernels import BACKEND, slow
from avcsym._quad import GAUSS_WEIGHTS, KRONROD_NODES, KRONROD_WEIGHTS

try:
    from avcsym._kernels import _native as native
except ImportError:
    native = None


def random_standard_tableau(rng, m, n):
    """Feasible-origin standard form: [A | I | b] with slack basis.

    The last row is sum(x) <= 50, which keeps every instance bounded so the
    pivot loop always runs to optimality.
    """
    a = rng.normal(size=(m, n))
    a[-1] = 1.0
    b = rng.uniform(0.5, 2.0, size=m)
    b[-1] = 50.0
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b
    cost = np.concatenate([rng.normal(size=n), np.zeros(m)])
    basis = np.arange(n, n + m, dtype=np.int64)
    return tableau, basis, cost


def bench_simplex(backend, instances):
    start = time.perf_counter()
    pivots = 0
    for tableau, basis, cost in instances:
        status, done, _ = backend.simplex_run(
            tableau.copy(), basis.copy(), cost, 1e-12, 1e-9, 1000, 0, 100_000
        )
        assert status == backend.STATUS_OPTIMAL
        pivots += done
    return time.perf_counter() - start, f"{pivots} pivots"


def bench_gk(backend, work):
    b, phi, v, centers, halfwidths = work
    start = time.perf_counter()
    hi, lo = backend.gk_panel_sums(
        b, phi, v, centers, halfwidths, KRONROD_NODES, KRONROD_WEIGHTS, GAUSS_WEIGHTS
    )
    return time.perf_counter() - start, f"sum {float(hi.sum()):.6f}"


def bench_l1(backend, clouds):
    a, b = clouds
    start = time.perf_counter()
    best = backend.pairwise_l1_min(a, b)
    return time.perf_counter() - start, f"min {best:.6f}"


def run(name, fn, payload, repeats):
    times = {}
    note = ""
    for label, backend in (("pure", slow), ("native", native)):
        if backend is None:
            continue
        best = math.inf
        for _ in range(repeats):
            elapsed, note = fn(backend, payload)
            best = min(best, elapsed)
        times[label] = best
    pure = times["pure"]
    if "native" in times:
        nat = times["native"]
        ratio = pure / nat if nat > 0 else math.inf
        print(f"{name:<18} {pure:>9.4f}s {nat:>9.4f}s {ratio:>7.2f}x   {note}")
    else:
        print(f"{name:<18} {pure:>9.4f}s {'-':>10} {'-':>8}   {note}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--items", type=int, default=200_000,
                        help="work items for the quadrature kernel")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(7)
    instances = [random_standard_tableau(rng, 60, 120) for _ in range(20)]
    gk_work = (
        rng.uniform(0.0, 6.0, args.items),
        rng.uniform(-np.pi, np.pi, args.items),
        2.0,
        rng.uniform(-np.pi, np.pi, args.items),
        rng.uniform(1e-3, 0.3, args.items),
    )
    clouds = (rng.uniform(0, 1, (5151, 2)), rng.uniform(0, 1, (5151, 2)))

    print(f"selected backend: {BACKEND}"
          + ("" if native is not None else " (native extension not built)"))
    print(f"{'kernel':<18} {'pure':>10} {'native':>10} {'speedup':>8}")
    run("simplex_run", bench_simplex, instances, args.repeats)
    run("gk_panel_sums", bench_gk, gk_work, args.repeats)
    run("pairwise_l1_min", bench_l1, clouds, args.repeats)


if __name__ == "__main__":
    main()
