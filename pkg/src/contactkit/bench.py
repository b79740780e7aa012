"""Benchmark the compiled descent kernel against the NumPy fallback."""

import time

import numpy as np

from .graphenum import ContactGraph
from .kernels import backends
from .realize import SolverConfig, _initial_points, _pair_arrays


def octahedron_graph():
    # antipodal pairs (0,5), (1,4), (2,3) are the non-edges
    non = {(0, 5), (1, 4), (2, 3)}
    edges = [
        (i, j) for i in range(6) for j in range(i + 1, 6) if (i, j) not in non
    ]
    return ContactGraph.from_edges(6, edges)


def k_complete(n):
    return ContactGraph.from_edges(
        n, [(i, j) for i in range(n) for j in range(i + 1, n)]
    )


def run(restarts=50, iters=2000, seed=0):
    """Time descend_batch per backend on a realizable and an unrealizable
    graph; returns {case: {backend: seconds}}."""
    cases = {"octahedron": octahedron_graph(), "K5": k_complete(5)}
    cfg = SolverConfig(restarts=restarts, iters=iters, seed=seed)
    results = {}
    for name, g in cases.items():
        ii, jj, isedge = _pair_arrays(g)
        results[name] = {}
        for bname, impl in backends().items():
            inits = _initial_points(g, cfg, restarts)
            t0 = time.perf_counter()
            impl.descend_batch(inits, ii, jj, isedge, iters, 0.0)
            results[name][bname] = time.perf_counter() - t0
    return results


def main():
    results = run()
    print("case\tbackend\tseconds")
    for case, per in results.items():
        for backend, secs in per.items():
            print("%s\t%s\t%.3f" % (case, backend, secs))
        if {"pure", "compiled"} <= per.keys():
            print("%s\tspeedup\t%.1fx" % (case, per["pure"] / per["compiled"]))


if __name__ == "__main__":
    main()
