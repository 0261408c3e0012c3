"""Centrality-guided operators: hybrid swarm initialization and local search.

Both operators exploit routing betweenness. The initializer rank-aligns part
of the random swarm with edge centrality so congestion-prone edges start
heavy; the local search repeatedly inflates the weights around the most
loaded node so routing spreads away from it.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from netcap.engine import Archive, Particle, archive_update, dominates, update_pbest
from netcap.graph import Network, random_weights
from netcap.objectives import (
    ObjectivePoint,
    nbec,
    point_from_betweenness,
    routing_betweenness,
)

__all__ = ["echi_init", "ncls", "apply_ncls_to_swarm", "make_echi_init", "make_ncls_operator"]


def echi_init(net: Network, pop: int, rng: np.random.Generator, hir: float = 0.5) -> list[np.ndarray]:
    """Hybrid swarm initialization guided by edge centrality.

    Draws ``pop`` random weight vectors; the first ``round(hir * pop)`` of
    them are reordered so that the edge with the k-th largest centrality
    (computed under that vector's own weights, ties broken by ascending edge
    id) carries the k-th largest of the vector's values. Reordering permutes
    a vector's values, so each vector keeps its value multiset.
    """
    if not 0.0 <= hir <= 1.0:
        raise ValueError("hir must be in [0, 1]")
    swarm = [random_weights(net, rng) for _ in range(pop)]
    n_hir = int(math.floor(hir * pop + 0.5))
    for k in range(n_hir):
        ec = nbec(net, swarm[k])
        # stable argsort on -ec gives descending centrality, ascending id on ties
        by_centrality = np.argsort(-ec, kind="stable")
        values_desc = np.sort(swarm[k])[::-1]
        reordered = np.empty_like(swarm[k])
        reordered[by_centrality] = values_desc
        swarm[k] = reordered
    return swarm


def ncls(
    net: Network, z: np.ndarray, n: int, rng: np.random.Generator
) -> list[tuple[np.ndarray, ObjectivePoint]]:
    """Local search around one solution, guided by the most loaded node.

    Builds a chain of ``n`` neighbors: at each step the node with the largest
    routing betweenness (lowest id on ties) has every incident edge weight
    increased by an independent uniform(0, 1) draw, clamped at 1; the result
    is the next neighbor and the base for the following step. Returns the
    evaluated neighbors that are mutually nondominated.
    """
    if n < 0:
        raise ValueError("neighbor count must be >= 0")
    if n == 0:
        return []
    current = np.array(z, dtype=np.float64)
    res = routing_betweenness(net, current)
    evaluated: list[tuple[np.ndarray, ObjectivePoint]] = []
    for _ in range(n):
        hot = res.max_node
        current = current.copy()
        for e in net.incident_edges(hot):
            current[e] = min(current[e] + rng.random(), 1.0)
        # the betweenness of this neighbor both scores it and steers the
        # next iteration of the chain
        res = routing_betweenness(net, current)
        evaluated.append((current, point_from_betweenness(net, res)))
    return _nondominated(evaluated)


def _nondominated(entries: list[tuple[np.ndarray, ObjectivePoint]]):
    keep = []
    for i, (_, p) in enumerate(entries):
        if not any(dominates(q, p) for j, (_, q) in enumerate(entries) if j != i):
            keep.append(entries[i])
    return keep


def apply_ncls_to_swarm(
    swarm: list[Particle],
    archive: Archive,
    rng: np.random.Generator,
    *,
    net: Network,
    n_neighbors: int,
) -> None:
    """Improve one uniformly chosen particle via local search.

    All returned neighbors go to the archive; the particle jumps to one of
    them chosen uniformly (velocity reset to zero, pbest updated under the
    usual rule). A particle is left untouched when the search returns nothing.
    """
    if not swarm:
        raise ValueError("swarm must be non-empty")
    p = swarm[int(rng.integers(len(swarm)))]
    found = ncls(net, p.position, n_neighbors, rng)
    if not found:
        return
    archive_update(archive, found)
    weights, point = found[int(rng.integers(len(found)))]
    p.position = weights.copy()
    p.velocity = np.zeros_like(p.velocity)
    update_pbest(p, point, rng)


def make_echi_init(hir: float):
    """Initializer with a fixed heuristic rate, for plugging into the engine."""
    return functools.partial(echi_init, hir=hir)


def make_ncls_operator(net: Network, n_neighbors: int):
    """Local-search operator bound to one network, for plugging into the engine."""
    return functools.partial(apply_ncls_to_swarm, net=net, n_neighbors=n_neighbors)
