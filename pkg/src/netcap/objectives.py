"""Transport objectives from routing betweenness.

Both objectives derive from the per-node routing betweenness B_i under
smallest-weight-path routing of a weighted network:

* capacity  lambda_c = (N - 1) / max_i B_i   (packets per node per step,
  unit node capacity) -- maximized;
* hops      h_avg = sum_i B_i / (N (N - 1))  -- average number of
  intermediate nodes on a routed path, minimized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from netcap import _kernels
from netcap.graph import Network

__all__ = [
    "LAMBDA_SENTINEL",
    "BetweennessResult",
    "ObjectivePoint",
    "routing_betweenness",
    "evaluate",
    "nbec",
]

# Stand-in capacity when no node is intermediate on any routed path (every
# pair adjacent): keeps dominance comparisons total.
LAMBDA_SENTINEL = 1e18


@dataclass(frozen=True, slots=True)
class ObjectivePoint:
    """One point in objective space: capacity (max) and mean hops (min)."""

    lambda_c: float
    h_avg: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.lambda_c, self.h_avg)

    @property
    def capacity_saturated(self) -> bool:
        return self.lambda_c >= LAMBDA_SENTINEL


@dataclass(frozen=True)
class BetweennessResult:
    per_node: np.ndarray
    max_value: float
    max_node: int
    sum_value: float


def routing_betweenness(net: Network, x) -> BetweennessResult:
    """Routing betweenness of every node, counting ordered (s, t) pairs.

    Tied smallest-weight paths (relative tolerance 1e-12) contribute
    fractionally. Raises on a weight vector with non-positive entries or the
    wrong length.
    """
    w = net.check_weights(x)
    b = _kernels.betweenness(
        net.indptr, net.nbr_nodes, net.nbr_edges, net.twin_slot, w, net.node_count
    )
    max_node = int(np.argmax(b))  # ties resolve to the lowest node id
    return BetweennessResult(
        per_node=b,
        max_value=float(b[max_node]),
        max_node=max_node,
        sum_value=float(b.sum()),
    )


def evaluate(net: Network, x) -> ObjectivePoint:
    """Evaluate the capacity/hops objective pair for one weight vector."""
    return point_from_betweenness(net, routing_betweenness(net, x))


def point_from_betweenness(net: Network, res: BetweennessResult) -> ObjectivePoint:
    """Objective pair from an already-computed betweenness result."""
    n = net.node_count
    if res.max_value > 0.0:
        lam = (n - 1) / res.max_value
    else:
        lam = LAMBDA_SENTINEL
    h = res.sum_value / (n * (n - 1))
    return ObjectivePoint(lambda_c=lam, h_avg=h)


def nbec(net: Network, x) -> np.ndarray:
    """Edge centrality: mean betweenness of the edge's endpoints, normalized.

    EC[e] = (B_u + B_v) / (2 * sum_t B_t) for edge e = (u, v). When the total
    betweenness is zero (every pair adjacent under the current weights) the
    centralities degenerate to the uniform 1/M.
    """
    res = routing_betweenness(net, x)
    m = net.edge_count
    if res.sum_value <= 0.0:
        return np.full(m, 1.0 / m)
    b = res.per_node
    u = net.edges[:, 0]
    v = net.edges[:, 1]
    return (b[u] + b[v]) / (2.0 * res.sum_value)
