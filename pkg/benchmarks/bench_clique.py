"""Time the Cython and pure-Python clique kernels on reduced derangement graphs.

    python3 benchmarks/bench_clique.py [--repeat N]

"max" rows time the clique number search and report the clique size found on
the reduced graph (one less than the clique number of the derangement graph).
"enum" rows list maximum cliques of the reduced graph, stopping at 100000, and
report how many were found. The G(n, p) rows are dense random graphs.
"""
from __future__ import annotations

import argparse
import logging
import time

import numpy as np

from ekr import kernels
from ekr.action import build_coset_action
from ekr.catalog import build_named, heisenberg_element
from ekr.ekrgraph import build_graph
from ekr.groupcore import subgroup_generate

log = logging.getLogger("bench")


def _heisenberg(p: int):
    G = build_named("heisenberg", {"p": p})
    return G, [G.index_of(heisenberg_element(p, 1, 0, 0))]


def _matrix(name: str, n: int, q: int, gens: list[list[int]]):
    G = build_named(name, {"n": n, "q": q})
    return G, [G.index_of(np.array(g)) for g in gens]


CASES = {
    "heisenberg p=5": lambda: _heisenberg(5),
    "heisenberg p=7": lambda: _heisenberg(7),
    "SL2(5) / <J>": lambda: _matrix("SL", 2, 5, [[0, 4, 1, 0]]),
    "SL2(7) / <J>": lambda: _matrix("SL", 2, 7, [[0, 6, 1, 0]]),
    "GL2(5) / unipotent": lambda: _matrix("GL", 2, 5, [[1, 1, 0, 1]]),
}


def reduced(case: str) -> np.ndarray:
    G, gens = CASES[case]()
    action = build_coset_action(G, subgroup_generate(G, gens))
    return build_graph(action).reduced_adjacency


def best_time(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def random_graph(n: int, density: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    A = np.triu(rng.random((n, n)) < density, 1)
    return kernels.pack_adjacency(A | A.T)


def workloads():
    for case in CASES:
        adj = reduced(case)
        yield f"max  {case}", adj, lambda k, adj=adj: k.max_clique_size(adj)
        omega = kernels.backend("python").max_clique_size(adj)
        yield (f"enum {case}", adj,
               lambda k, adj=adj, omega=omega: len(k.cliques_of_size(adj, omega, 100000)[0]))
    for n, density in ((100, 0.9), (150, 0.8), (200, 0.7)):
        adj = random_graph(n, density, seed=n)
        yield f"max  G({n}, {density})", adj, lambda k, adj=adj: k.max_clique_size(adj)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        cy = kernels.backend("cython")
    except ImportError:
        log.warning("Cython extension not built; only the Python kernel is timed")
        cy = None
    py = kernels.backend("python")
    print(f"{'workload':30s} {'m':>4s} {'result':>7s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for label, adj, job in workloads():
        result = job(py)
        tp = best_time(lambda: job(py), args.repeat)
        if cy is None:
            print(f"{label:30s} {adj.shape[0]:4d} {result:7d} {tp:10.4f} {'-':>10s} {'-':>8s}")
            continue
        if job(cy) != result:
            raise AssertionError(f"backends disagree on {label}")
        tc = best_time(lambda: job(cy), args.repeat)
        print(f"{label:30s} {adj.shape[0]:4d} {result:7d} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}")


if __name__ == "__main__":
    main()
