"""Network topology: immutable undirected graphs, synthetic generators, file I/O.

A :class:`Network` stores the topology once; edge weights live in separate
per-worker vectors indexed by edge id, so the same topology can be shared
across parallel evaluations.
"""

from __future__ import annotations

import warnings
from collections import deque
from pathlib import Path

import numpy as np

__all__ = [
    "Network",
    "generate_ba",
    "generate_ws",
    "load_edgelist",
    "write_edgelist",
    "random_weights",
]

# Lower box bound for edge weights; keeps weights strictly positive while
# approximating the open interval (0, 1].
WEIGHT_FLOOR = 1e-6


class Network:
    """Undirected, connected graph with dense stable edge ids 0..M-1.

    Immutable after construction: the CSR arrays are marked read-only and are
    safe to share across threads/processes. Mutable state (the weight vector)
    is kept outside this class.

    Attributes
    ----------
    node_count : int
    edge_count : int
    edges : (M, 2) int32 array, each row (u, v) with u < v
    indptr, nbr_nodes, nbr_edges : CSR adjacency; for node u, the slots
        indptr[u]:indptr[u+1] list (neighbor id, edge id) pairs sorted by
        neighbor id.
    twin_slot : for the directed slot (u -> v), the index of the slot
        (v -> u); used by the betweenness kernels to flag predecessor edges.
    """

    __slots__ = ("node_count", "edge_count", "edges", "indptr", "nbr_nodes", "nbr_edges", "twin_slot")

    def __init__(self, node_count: int, edges):
        edges = np.asarray(edges, dtype=np.int32)
        if edges.ndim != 2 or (edges.size and edges.shape[1] != 2):
            raise ValueError("edges must be an (M, 2) array")
        if node_count < 1:
            raise ValueError("need at least one node")
        m = len(edges)
        if m:
            lo = np.minimum(edges[:, 0], edges[:, 1])
            hi = np.maximum(edges[:, 0], edges[:, 1])
            if np.any(lo == hi):
                raise ValueError("self-loops are not allowed")
            if lo.min() < 0 or hi.max() >= node_count:
                raise ValueError("edge endpoint out of range")
            keys = lo.astype(np.int64) * node_count + hi
            if len(np.unique(keys)) != m:
                raise ValueError("parallel edges are not allowed")
            edges = np.stack([lo, hi], axis=1).astype(np.int32)

        self.node_count = int(node_count)
        self.edge_count = m
        self.edges = edges

        deg = np.zeros(node_count, dtype=np.int64)
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        indptr = np.zeros(node_count + 1, dtype=np.int32)
        np.cumsum(deg, out=indptr[1:])
        nbr_nodes = np.zeros(2 * m, dtype=np.int32)
        nbr_edges = np.zeros(2 * m, dtype=np.int32)
        fill = indptr[:-1].copy()
        # two passes so each adjacency list ends up sorted by neighbor id:
        # edges are first bucketed, then each bucket sorted with its edge ids
        for e, (u, v) in enumerate(edges):
            nbr_nodes[fill[u]], nbr_edges[fill[u]] = v, e
            fill[u] += 1
            nbr_nodes[fill[v]], nbr_edges[fill[v]] = u, e
            fill[v] += 1
        for u in range(node_count):
            lo_i, hi_i = indptr[u], indptr[u + 1]
            order = np.argsort(nbr_nodes[lo_i:hi_i], kind="stable")
            nbr_nodes[lo_i:hi_i] = nbr_nodes[lo_i:hi_i][order]
            nbr_edges[lo_i:hi_i] = nbr_edges[lo_i:hi_i][order]

        # twin_slot[k] = slot of the reverse direction of slot k; each edge id
        # owns exactly two slots
        twin = np.zeros(2 * m, dtype=np.int32)
        first_slot = np.full(m, -1, dtype=np.int32)
        for k in range(2 * m):
            e = nbr_edges[k]
            if first_slot[e] < 0:
                first_slot[e] = k
            else:
                twin[first_slot[e]] = k
                twin[k] = first_slot[e]

        for arr in (edges, indptr, nbr_nodes, nbr_edges, twin):
            arr.setflags(write=False)
        self.indptr = indptr
        self.nbr_nodes = nbr_nodes
        self.nbr_edges = nbr_edges
        self.twin_slot = twin

        if not self.is_connected():
            raise ValueError("network must be connected")

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    def neighbors(self, u: int) -> np.ndarray:
        return self.nbr_nodes[self.indptr[u]:self.indptr[u + 1]]

    def incident_edges(self, u: int) -> np.ndarray:
        """Edge ids incident to u, ascending."""
        return np.sort(self.nbr_edges[self.indptr[u]:self.indptr[u + 1]])

    def average_degree(self) -> float:
        return 2.0 * self.edge_count / self.node_count

    def is_connected(self) -> bool:
        if self.node_count == 1:
            return True
        if self.edge_count == 0:
            return False
        seen = np.zeros(self.node_count, dtype=bool)
        seen[0] = True
        queue = deque([0])
        count = 1
        while queue:
            u = queue.popleft()
            for v in self.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    queue.append(int(v))
        return count == self.node_count

    def check_weights(self, x) -> np.ndarray:
        """Validate a weight vector for this network and return it as float64."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.edge_count,):
            raise ValueError(f"weight vector must have length {self.edge_count}, got {x.shape}")
        if np.any(x <= 0.0):
            raise ValueError("edge weights must be positive")
        return x

    def __repr__(self):
        return f"Network(N={self.node_count}, M={self.edge_count})"


def random_weights(net: Network, rng: np.random.Generator) -> np.ndarray:
    """Draw one weight vector uniformly from (0, 1]^M, floored at WEIGHT_FLOOR."""
    return np.maximum(1.0 - rng.random(net.edge_count), WEIGHT_FLOOR)


def generate_ba(n: int, m: int, seed) -> Network:
    """Scale-free graph by preferential attachment.

    Starts from m isolated seed nodes; each newcomer attaches m distinct
    targets sampled proportionally to degree+1 (so unattached seeds remain
    reachable, and the first arrival links all seeds). Always yields a
    connected graph with exactly m*(n-m) edges.
    """
    if m < 1 or n <= m:
        raise ValueError(f"generate_ba requires n > m >= 1, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    deg = np.zeros(n, dtype=np.float64)
    edges = []
    for j in range(m, n):
        w = deg[:j] + 1.0
        targets = rng.choice(j, size=m, replace=False, p=w / w.sum())
        for t in np.sort(targets):
            edges.append((int(t), j))
            deg[t] += 1
        deg[j] += m
    return Network(n, np.array(edges, dtype=np.int32))


def generate_ws(n: int, k: int, p: float, seed) -> Network:
    """Small-world graph: ring lattice of even degree k, each edge rewired
    with probability p to a uniformly chosen non-duplicate endpoint.

    Regenerates (from the same seeded stream) until connected, so the result
    always has exactly n*k/2 edges and is connected.
    """
    if k % 2 != 0 or k < 2 or k >= n:
        raise ValueError(f"generate_ws requires even k with 2 <= k < n, got k={k}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"rewiring probability must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    for _attempt in range(500):
        edges = [((i, (i + off) % n)) for off in range(1, k // 2 + 1) for i in range(n)]
        adj = {u: set() for u in range(n)}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        for idx, (u, v) in enumerate(edges):
            if p > 0.0 and rng.random() < p:
                allowed = [w for w in range(n) if w != u and w not in adj[u]]
                if not allowed:
                    continue
                w = allowed[int(rng.integers(len(allowed)))]
                adj[u].discard(v)
                adj[v].discard(u)
                adj[u].add(w)
                adj[w].add(u)
                edges[idx] = (u, w)
        try:
            net = Network(n, np.array(edges, dtype=np.int32))
        except ValueError:
            continue
        return net
    raise RuntimeError(f"could not generate a connected WS({n}, {k}, {p}) network")


def load_edgelist(path) -> Network:
    """Read a whitespace-separated edge list ('u v' per line, '#' comments).

    Labels may be arbitrary strings; they are mapped to dense ids in first-
    appearance order. Self-loops and duplicate edges are dropped with a
    warning each; if the graph is disconnected, the largest connected
    component is kept (ids re-densified, appearance order preserved).
    """
    path = Path(path)
    labels: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    edge_set: set[tuple[int, int]] = set()
    n_dup = n_loop = 0
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v', got {raw!r}")
            a, b = parts[0], parts[1]
            for lab in (a, b):
                if lab not in labels:
                    labels[lab] = len(labels)
            u, v = labels[a], labels[b]
            if u == v:
                n_loop += 1
                continue
            key = (min(u, v), max(u, v))
            if key in edge_set:
                n_dup += 1
                continue
            edge_set.add(key)
            edges.append(key)
    if n_loop:
        warnings.warn(f"{path}: dropped {n_loop} self-loop(s)", stacklevel=2)
    if n_dup:
        warnings.warn(f"{path}: dropped {n_dup} duplicate edge(s)", stacklevel=2)
    if not edges:
        raise ValueError(f"{path}: no edges found")

    n = len(labels)
    comp = _largest_component(n, edges)
    if len(comp) < n:
        warnings.warn(
            f"{path}: graph is disconnected; keeping largest component "
            f"({len(comp)} of {n} nodes)",
            stacklevel=2,
        )
        keep = sorted(comp)  # preserves first-appearance order of ids
        remap = {old: new for new, old in enumerate(keep)}
        edges = [(remap[u], remap[v]) for u, v in edges if u in comp and v in comp]
        n = len(keep)
    return Network(n, np.array(edges, dtype=np.int32))


def _largest_component(n: int, edges) -> set[int]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    best: set[int] = set()
    for s in range(n):
        if seen[s]:
            continue
        comp = {s}
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.add(v)
                    queue.append(v)
        if len(comp) > len(best):
            best = comp
    return best


def write_edgelist(net: Network, path, header: str | None = None) -> None:
    """Write 'u v' lines; an optional header is emitted as '#' comments."""
    with open(path, "w") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for u, v in net.edges:
            fh.write(f"{u} {v}\n")
