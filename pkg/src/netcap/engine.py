"""Multi-objective PSO engine with a crowding-distance archive.

One engine serves every PSO variant in this package; the variants differ only
in the swarm initializer and the optional local-search operator plugged into
:func:`run`. Objectives are fixed to (capacity max, hops min).

RNG draw order (single stream, documented so seeded runs are reproducible):

1. initializer draws (positions), then velocities (pop x M), then one draw
   for the initial gbest pick;
2. per generation: for each particle in index order, the two scalar
   acceleration factors, then (only when its new point is incomparable with
   its pbest) one coin flip; then the local-search draws, if enabled; then
   one draw for the gbest refresh.

Evaluations never consume RNG, so they may be parallelized without changing
results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from netcap.graph import WEIGHT_FLOOR, Network, random_weights
from netcap.objectives import ObjectivePoint, evaluate

__all__ = [
    "EngineConfig",
    "Particle",
    "ArchiveEntry",
    "Archive",
    "dominates",
    "crowding_distances",
    "pso_step",
    "archive_update",
    "select_gbest",
    "random_init",
    "run",
]

POSITION_LOW = WEIGHT_FLOOR
POSITION_HIGH = 1.0
VELOCITY_INIT = 0.1
# Objective points closer than this (relative, per coordinate) are treated as
# duplicates and not re-inserted into the archive.
DUP_RTOL = 1e-12


@dataclass
class EngineConfig:
    """Engine parameters; defaults follow the published full-budget settings."""

    pop: int = 200
    maxgen: int = 500
    c1: float = 1.5
    c2: float = 2.0
    omega: float = 0.4
    archive_capacity: int | None = None  # None -> pop
    hir: float = 0.5
    n_ls: int = 300
    seed: int = 0

    def __post_init__(self):
        if self.pop < 2:
            raise ValueError("pop must be >= 2")
        if not 0.0 <= self.hir <= 1.0:
            raise ValueError("hir must be in [0, 1]")
        if self.n_ls < 0:
            raise ValueError("n_ls must be >= 0")
        if self.maxgen < 0:
            raise ValueError("maxgen must be >= 0")

    @property
    def capacity(self) -> int:
        return self.pop if self.archive_capacity is None else self.archive_capacity


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_objectives: ObjectivePoint
    # nondominated trail of past pbests; guards the coin-flip replacement so
    # a pbest is never dominated by the particle's own history
    pbest_memory: list[ObjectivePoint] = field(default_factory=list)


@dataclass
class ArchiveEntry:
    weights: np.ndarray
    objectives: ObjectivePoint
    crowding: float = 0.0


class Archive:
    """Bounded, mutually nondominated set of solutions with crowding distances."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("archive capacity must be >= 1")
        self.capacity = capacity
        self.entries: list[ArchiveEntry] = []

    def __len__(self):
        return len(self.entries)

    def points(self) -> list[ObjectivePoint]:
        return [e.objectives for e in self.entries]

    def refresh_crowding(self) -> None:
        dists = crowding_distances(self.points())
        for entry, d in zip(self.entries, dists):
            entry.crowding = d


def dominates(a: ObjectivePoint, b: ObjectivePoint) -> bool:
    """True iff a is at least as good on both objectives and better on one."""
    if a.lambda_c < b.lambda_c or a.h_avg > b.h_avg:
        return False
    return a.lambda_c > b.lambda_c or a.h_avg < b.h_avg


def _same_point(a: ObjectivePoint, b: ObjectivePoint) -> bool:
    return (
        abs(a.lambda_c - b.lambda_c) <= DUP_RTOL * max(1.0, abs(a.lambda_c))
        and abs(a.h_avg - b.h_avg) <= DUP_RTOL * max(1.0, abs(a.h_avg))
    )


def crowding_distances(points: Sequence[ObjectivePoint]) -> list[float]:
    """Crowding distance of each point within one nondominated set.

    Boundary points on either objective get +inf. Interior points accumulate,
    per objective, the gap between their two flanking neighbors normalized by
    twice the objective range (a zero range contributes nothing).
    """
    n = len(points)
    if n == 0:
        return []
    if n == 1:
        return [math.inf]
    dist = [0.0] * n
    for key in (lambda p: p.lambda_c, lambda p: p.h_avg):
        idx = sorted(range(n), key=lambda i: key(points[i]))
        lo, hi = key(points[idx[0]]), key(points[idx[-1]])
        span = hi - lo
        dist[idx[0]] = math.inf
        dist[idx[-1]] = math.inf
        if span <= 0.0:
            continue
        for j in range(1, n - 1):
            gap = key(points[idx[j + 1]]) - key(points[idx[j - 1]])
            if not math.isinf(dist[idx[j]]):
                dist[idx[j]] += gap / (2.0 * span)
    return dist


def pso_step(p: Particle, gbest: np.ndarray, cfg: EngineConfig, rng: np.random.Generator) -> None:
    """One velocity/position update, in place.

    The two acceleration factors are scalar per particle per step. Positions
    are clamped to [POSITION_LOW, POSITION_HIGH]; a clamped coordinate has its
    velocity zeroed to avoid sticking to the boundary.
    """
    r1 = rng.random()
    r2 = rng.random()
    v = (
        cfg.omega * p.velocity
        + cfg.c1 * r1 * (p.pbest_position - p.position)
        + cfg.c2 * r2 * (gbest - p.position)
    )
    pos = p.position + v
    clamped = (pos < POSITION_LOW) | (pos > POSITION_HIGH)
    np.clip(pos, POSITION_LOW, POSITION_HIGH, out=pos)
    v[clamped] = 0.0
    p.position = pos
    p.velocity = v


def update_pbest(p: Particle, point: ObjectivePoint, rng: np.random.Generator) -> None:
    """Replace pbest when the new point dominates it; coin-flip on incomparable.

    The coin flip is vetoed when the candidate is dominated by any earlier
    pbest of this particle, which keeps the pbest trajectory monotone under
    dominance.
    """
    if dominates(point, p.pbest_objectives):
        _accept_pbest(p, point)
    elif not dominates(p.pbest_objectives, point):
        if any(dominates(old, point) for old in p.pbest_memory):
            return
        if rng.random() < 0.5:
            _accept_pbest(p, point)


def _accept_pbest(p: Particle, point: ObjectivePoint) -> None:
    p.pbest_position = p.position.copy()
    p.pbest_objectives = point
    p.pbest_memory = [q for q in p.pbest_memory if not dominates(point, q)]
    p.pbest_memory.append(point)


def archive_update(arch: Archive, candidates) -> Archive:
    """Insert nondominated candidates, evict dominated incumbents, truncate.

    Candidates whose objectives duplicate an incumbent's (within 1e-12) are
    skipped. When over capacity, the minimum-crowding entry is dropped and
    distances are recomputed, repeatedly. Returns the (mutated) archive.
    """
    for weights, point in candidates:
        dominated = False
        survivors = []
        for entry in arch.entries:
            if dominates(entry.objectives, point) or _same_point(entry.objectives, point):
                dominated = True
                survivors = arch.entries
                break
            if not dominates(point, entry.objectives):
                survivors.append(entry)
        if dominated:
            continue
        arch.entries = survivors
        arch.entries.append(ArchiveEntry(np.array(weights, dtype=np.float64), point))
    while len(arch.entries) > arch.capacity:
        arch.refresh_crowding()
        drop = min(range(len(arch.entries)), key=lambda i: arch.entries[i].crowding)
        del arch.entries[drop]
    arch.refresh_crowding()
    return arch


def select_gbest(arch: Archive, rng: np.random.Generator) -> np.ndarray:
    """Uniform pick among the top 10% of archive entries by crowding distance."""
    n = len(arch.entries)
    if n == 0:
        raise ValueError("cannot select gbest from an empty archive")
    k = max(1, math.ceil(0.1 * n))
    order = sorted(range(n), key=lambda i: -arch.entries[i].crowding)
    pick = order[int(rng.integers(k))]
    return arch.entries[pick].weights


def random_init(net: Network, pop: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Purely random swarm: each coordinate uniform on (0, 1], floored."""
    return [random_weights(net, rng) for _ in range(pop)]


LocalSearch = Callable[[list[Particle], Archive, np.random.Generator], None]
Initializer = Callable[[Network, int, np.random.Generator], list[np.ndarray]]
Observer = Callable[[int, list[Particle], Archive], None]


def run(
    net: Network,
    cfg: EngineConfig,
    init: Initializer = random_init,
    local_search: LocalSearch | None = None,
    observer: Observer | None = None,
) -> Archive:
    """Run the swarm for cfg.maxgen generations and return the final archive.

    The observer, when given, is invoked after initialization (generation 0)
    and after every generation, so it fires maxgen+1 times.
    """
    rng = np.random.default_rng(cfg.seed)
    positions = init(net, cfg.pop, rng)
    if len(positions) != cfg.pop:
        raise ValueError("initializer returned wrong swarm size")
    swarm = []
    for pos in positions:
        vel = rng.uniform(-VELOCITY_INIT, VELOCITY_INIT, size=net.edge_count)
        point = evaluate(net, pos)
        swarm.append(
            Particle(
                position=pos,
                velocity=vel,
                pbest_position=pos.copy(),
                pbest_objectives=point,
                pbest_memory=[point],
            )
        )
    archive = Archive(cfg.capacity)
    archive_update(archive, [(p.position, p.pbest_objectives) for p in swarm])
    gbest = select_gbest(archive, rng)
    if observer is not None:
        observer(0, swarm, archive)

    for gen in range(1, cfg.maxgen + 1):
        fresh = []
        for p in swarm:
            pso_step(p, gbest, cfg, rng)
            point = evaluate(net, p.position)
            fresh.append((p.position.copy(), point))
            update_pbest(p, point, rng)
        if local_search is not None:
            local_search(swarm, archive, rng)
        archive_update(archive, fresh)
        gbest = select_gbest(archive, rng)
        if observer is not None:
            observer(gen, swarm, archive)
    return archive
