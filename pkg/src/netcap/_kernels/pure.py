"""Pure-Python kernels: weighted Brandes betweenness and next-hop tables.

Reference implementations; the compiled extension in ``_brandes.pyx`` mirrors
these exactly (same tie tolerance, same accumulation structure). Keep the two
in sync.
"""

from __future__ import annotations

import heapq

import numpy as np

# Two path weights are considered equal iff |a - b| <= TIE_RTOL * max(1, incumbent).
TIE_RTOL = 1e-12


def betweenness(indptr, nbr_nodes, nbr_edges, twin_slot, weights, n: int) -> np.ndarray:
    """Per-node routing betweenness under smallest-weight-path routing.

    Counts ordered source/target pairs: B[i] = sum over (s, t), s != i != t,
    of (number of smallest-weight s->t paths through i) / (number of
    smallest-weight s->t paths). Tied paths are detected with a relative
    tolerance of TIE_RTOL and split fractionally.
    """
    b = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.float64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    settled = np.empty(n, dtype=bool)
    is_pred = np.zeros(len(nbr_nodes), dtype=bool)
    order = np.empty(n, dtype=np.int64)

    for s in range(n):
        dist.fill(1e300)  # large finite, so the tolerance arithmetic stays NaN-free
        sigma.fill(0.0)
        settled.fill(False)
        is_pred.fill(False)
        dist[s] = 0.0
        sigma[s] = 1.0
        heap = [(0.0, s)]
        n_settled = 0
        while heap:
            d_u, u = heapq.heappop(heap)
            if settled[u]:
                continue
            settled[u] = True
            order[n_settled] = u
            n_settled += 1
            d_u = dist[u]
            for k in range(indptr[u], indptr[u + 1]):
                v = nbr_nodes[k]
                if settled[v]:
                    continue
                nd = d_u + weights[nbr_edges[k]]
                d_v = dist[v]
                tol = TIE_RTOL * (d_v if d_v > 1.0 else 1.0)
                if nd < d_v - tol:
                    # strictly better: reset predecessor set of v
                    lo, hi = indptr[v], indptr[v + 1]
                    is_pred[lo:hi] = False
                    is_pred[twin_slot[k]] = True
                    dist[v] = nd
                    sigma[v] = sigma[u]
                    heapq.heappush(heap, (nd, int(v)))
                elif nd <= d_v + tol:
                    is_pred[twin_slot[k]] = True
                    sigma[v] += sigma[u]
        # dependency accumulation in reverse settle order
        delta.fill(0.0)
        for i in range(n_settled - 1, 0, -1):
            w_node = order[i]
            coeff = (1.0 + delta[w_node]) / sigma[w_node]
            for k in range(indptr[w_node], indptr[w_node + 1]):
                if is_pred[k]:
                    u = nbr_nodes[k]
                    delta[u] += sigma[u] * coeff
            b[w_node] += delta[w_node]
    return b


def sssp_distances(indptr, nbr_nodes, nbr_edges, weights, n: int, source: int) -> np.ndarray:
    """Smallest-weight-path distances from one source (plain Dijkstra)."""
    dist = np.full(n, np.inf, dtype=np.float64)
    settled = np.zeros(n, dtype=bool)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d_u, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        d_u = dist[u]
        for k in range(indptr[u], indptr[u + 1]):
            v = nbr_nodes[k]
            if settled[v]:
                continue
            nd = d_u + weights[nbr_edges[k]]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, int(v)))
    return dist


def next_hop_table(indptr, nbr_nodes, nbr_edges, weights, n: int) -> np.ndarray:
    """Deterministic single-path routing table.

    table[u, t] is the next hop from u on a smallest-weight path to t
    (lowest node id among tied next hops); table[t, t] = -1.
    """
    table = np.full((n, n), -1, dtype=np.int32)
    for t in range(n):
        dist = sssp_distances(indptr, nbr_nodes, nbr_edges, weights, n, t)
        for u in range(n):
            if u == t:
                continue
            d_u = dist[u]
            tol = TIE_RTOL * (d_u if d_u > 1.0 else 1.0)
            best = -1
            for k in range(indptr[u], indptr[u + 1]):
                v = nbr_nodes[k]
                if abs(weights[nbr_edges[k]] + dist[v] - d_u) <= tol:
                    best = v  # adjacency is sorted by id; first match is lowest
                    break
            table[u, t] = best
    return table
