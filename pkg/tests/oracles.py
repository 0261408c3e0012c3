"""Independent oracles for cross-checking the fast implementations.

These deliberately avoid the Brandes/Dijkstra machinery of the package:
distances come from Floyd-Warshall and path counts from bounded exhaustive
enumeration, so agreement is meaningful.
"""

from __future__ import annotations

from collections import deque

import numpy as np


def enumerate_betweenness(net, weights, tol: float = 1e-9) -> np.ndarray:
    """Brute-force routing betweenness over ordered pairs.

    All smallest-weight simple paths are enumerated with a depth-first search
    pruned by Floyd-Warshall distances; paths within ``tol`` of the optimum
    count as tied and split the pair's unit of flow evenly.
    """
    n = net.node_count
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(net.edges):
        w = float(weights[e])
        adj[u].append((int(v), w))
        adj[v].append((int(u), w))

    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u in range(n):
        for v, w in adj[u]:
            dist[u, v] = min(dist[u, v], w)
    for k in range(n):
        dist = np.minimum(dist, dist[:, k:k + 1] + dist[k:k + 1, :])

    b = np.zeros(n)
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            budget = dist[s, t] + tol
            paths: list[list[int]] = []
            stack = [(s, 0.0, [s])]
            while stack:
                u, acc, path = stack.pop()
                if u == t:
                    paths.append(path)
                    continue
                for v, w in adj[u]:
                    if v in path:
                        continue
                    nd = acc + w
                    if nd + dist[v, t] <= budget:
                        stack.append((v, nd, path + [v]))
            share = 1.0 / len(paths)
            for path in paths:
                for node in path[1:-1]:
                    b[node] += share
    return b


def bfs_betweenness(net) -> np.ndarray:
    """Hop-count shortest-path betweenness over ordered pairs (unweighted BFS).

    Independent cross-check for the uniform-weight case: plain BFS layering
    with path counting and a direct double loop over targets per source.
    """
    n = net.node_count
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in net.edges:
        adj[u].append(int(v))
        adj[v].append(int(u))

    b = np.zeros(n)
    for s in range(n):
        depth = [-1] * n
        sigma = [0.0] * n
        depth[s] = 0
        sigma[s] = 1.0
        layers = [[s]]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    if depth[v] == len(layers):
                        layers.append([])
                    layers[depth[v]].append(v)
                    queue.append(v)
                if depth[v] == depth[u] + 1:
                    sigma[v] += sigma[u]
        # fraction of s->t geodesics through i, summed explicitly per (t, i)
        for t in range(n):
            if t == s:
                continue
            # fraction of s->t geodesics through each node, by backwards DP
            frac = [0.0] * n
            frac[t] = 1.0
            for d in range(depth[t], 0, -1):
                for v in layers[d]:
                    if frac[v] == 0.0:
                        continue
                    for u in adj[v]:
                        if depth[u] == depth[v] - 1:
                            frac[u] += frac[v] * sigma[u] / sigma[v]
            for i in range(n):
                if i != s and i != t and depth[i] < depth[t]:
                    b[i] += frac[i]
    return b


def random_connected_graph(rng: np.random.Generator, n_max: int = 12):
    """A random connected simple graph with 3..n_max nodes (edges as a list)."""
    n = int(rng.integers(3, n_max + 1))
    # random spanning tree first, then extra edges
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(v))
        edges.add((u, v))
    extra = int(rng.integers(0, n))
    for _ in range(extra):
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return n, sorted(edges)
