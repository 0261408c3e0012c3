#!/usr/bin/env python3
"""Benchmark the compiled betweenness/next-hop kernels against the pure-Python
fallback on the standard synthetic instances.

Usage: python benchmarks/bench_betweenness.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from netcap._kernels import backend_name, pure
from netcap.graph import generate_ba, generate_ws

try:
    from netcap._kernels import _brandes
except ImportError:
    _brandes = None


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    instances = [
        ("BA100", generate_ba(100, 2, 42)),
        ("WS100", generate_ws(100, 4, 0.1, 1)),
        ("BA300", generate_ba(300, 2, 7)),
        ("WS300", generate_ws(300, 4, 0.1, 1)),
    ]
    rng = np.random.default_rng(0)
    print(f"active backend: {backend_name()}")
    print(f"{'instance':<8} {'kernel':<10} {'pure (ms)':>10} {'cython (ms)':>12} {'speedup':>8}")
    for name, net in instances:
        w = 0.05 + 0.95 * rng.random(net.edge_count)
        csr = (net.indptr, net.nbr_nodes, net.nbr_edges)
        for kernel in ("betweenness", "next_hop"):
            if kernel == "betweenness":
                pure_fn = lambda: pure.betweenness(*csr, net.twin_slot, w, net.node_count)
                cy_fn = (
                    (lambda: _brandes.betweenness(*csr, net.twin_slot, w, net.node_count))
                    if _brandes
                    else None
                )
            else:
                pure_fn = lambda: pure.next_hop_table(*csr, w, net.node_count)
                cy_fn = (
                    (lambda: _brandes.next_hop_table(*csr, w, net.node_count))
                    if _brandes
                    else None
                )
            t_pure = time_call(pure_fn, args.repeats)
            if cy_fn is None:
                print(f"{name:<8} {kernel:<10} {t_pure * 1e3:>10.1f} {'n/a':>12} {'n/a':>8}")
                continue
            # sanity: identical outputs before timing
            a, b = pure_fn(), cy_fn()
            assert np.allclose(a, b, rtol=1e-12, atol=1e-12)
            t_cy = time_call(cy_fn, args.repeats)
            print(
                f"{name:<8} {kernel:<10} {t_pure * 1e3:>10.1f} {t_cy * 1e3:>12.2f} "
                f"{t_pure / t_cy:>7.0f}x"
            )


if __name__ == "__main__":
    main()
