"""Baseline optimizers and named algorithm configurations.

The PSO variants are configurations of the shared engine; NSGA-II is a
self-contained real-coded implementation (SBX crossover + polynomial
mutation, fast nondominated sort, elitist survival).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from netcap.engine import (
    POSITION_HIGH,
    POSITION_LOW,
    Archive,
    EngineConfig,
    crowding_distances,
    dominates,
    random_init,
    run,
)
from netcap.graph import Network, random_weights
from netcap.objectives import ObjectivePoint, evaluate
from netcap.operators import make_echi_init, make_ncls_operator

__all__ = [
    "Nsga2Config",
    "nsga2_run",
    "fast_nondominated_sort",
    "nc_mopso_run",
    "mopsocd_run",
    "mopsocd_in_run",
    "ALGORITHMS",
]


@dataclass
class Nsga2Config:
    pop: int = 200
    maxgen: int = 500
    p_c: float = 0.9
    p_m: float | None = None  # None -> 1/M
    eta_c: float = 20.0
    eta_m: float = 20.0
    seed: int = 0

    def __post_init__(self):
        if self.pop < 2 or self.pop % 2 != 0:
            raise ValueError("pop must be even and >= 2")
        if not 0.0 <= self.p_c <= 1.0:
            raise ValueError("p_c must be in [0, 1]")
        if self.p_m is not None and not 0.0 <= self.p_m <= 1.0:
            raise ValueError("p_m must be in [0, 1]")
        if self.maxgen < 0:
            raise ValueError("maxgen must be >= 0")


def fast_nondominated_sort(points: list[ObjectivePoint]) -> list[int]:
    """Rank of each point (0 = nondominated front), Deb's fast sort."""
    n = len(points)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    counts = [0] * n
    rank = [0] * n
    front = []
    for i in range(n):
        for j in range(i + 1, n):
            if dominates(points[i], points[j]):
                dominated_by[i].append(j)
                counts[j] += 1
            elif dominates(points[j], points[i]):
                dominated_by[j].append(i)
                counts[i] += 1
    for i in range(n):
        if counts[i] == 0:
            rank[i] = 0
            front.append(i)
    level = 0
    while front:
        nxt = []
        for i in front:
            for j in dominated_by[i]:
                counts[j] -= 1
                if counts[j] == 0:
                    rank[j] = level + 1
                    nxt.append(j)
        level += 1
        front = nxt
    return rank


def _sbx_pair(a, b, eta, rng):
    """Bounded simulated binary crossover of two parents, per gene."""
    low, high = POSITION_LOW, POSITION_HIGH
    c1 = a.copy()
    c2 = b.copy()
    for j in range(len(a)):
        if rng.random() > 0.5:
            continue
        x1, x2 = (a[j], b[j]) if a[j] <= b[j] else (b[j], a[j])
        if x2 - x1 < 1e-14:
            continue
        u = rng.random()
        # child 1, contracted toward the lower parent
        beta = 1.0 + 2.0 * (x1 - low) / (x2 - x1)
        alpha = 2.0 - beta ** -(eta + 1.0)
        bq = (u * alpha) ** (1.0 / (eta + 1.0)) if u <= 1.0 / alpha else (
            1.0 / (2.0 - u * alpha)
        ) ** (1.0 / (eta + 1.0))
        y1 = 0.5 * ((x1 + x2) - bq * (x2 - x1))
        # child 2, toward the upper parent
        beta = 1.0 + 2.0 * (high - x2) / (x2 - x1)
        alpha = 2.0 - beta ** -(eta + 1.0)
        bq = (u * alpha) ** (1.0 / (eta + 1.0)) if u <= 1.0 / alpha else (
            1.0 / (2.0 - u * alpha)
        ) ** (1.0 / (eta + 1.0))
        y2 = 0.5 * ((x1 + x2) + bq * (x2 - x1))
        y1 = min(max(y1, low), high)
        y2 = min(max(y2, low), high)
        if rng.random() < 0.5:
            y1, y2 = y2, y1
        c1[j], c2[j] = y1, y2
    return c1, c2


def _polynomial_mutation(x, p_m, eta, rng):
    """Bounded polynomial mutation, per gene with probability p_m."""
    low, high = POSITION_LOW, POSITION_HIGH
    span = high - low
    y = x.copy()
    for j in range(len(y)):
        if rng.random() >= p_m:
            continue
        u = rng.random()
        if u < 0.5:
            d1 = (y[j] - low) / span
            delta = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1) ** (eta + 1.0)) ** (
                1.0 / (eta + 1.0)
            ) - 1.0
        else:
            d2 = (high - y[j]) / span
            delta = 1.0 - (
                2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2) ** (eta + 1.0)
            ) ** (1.0 / (eta + 1.0))
        y[j] = min(max(y[j] + delta * span, low), high)
    return y


def _tournament(rank, crowd, rng):
    i = int(rng.integers(len(rank)))
    j = int(rng.integers(len(rank)))
    if rank[i] != rank[j]:
        return i if rank[i] < rank[j] else j
    if crowd[i] != crowd[j]:
        return i if crowd[i] > crowd[j] else j
    return i


def nsga2_run(net: Network, cfg: Nsga2Config, observer=None) -> list[tuple[np.ndarray, ObjectivePoint]]:
    """Real-coded NSGA-II on the edge-weight box; returns the final rank-0 front.

    The observer, when given, receives (generation, rank-0 objective points)
    after initialization and after every generation.
    """
    rng = np.random.default_rng(cfg.seed)
    p_m = cfg.p_m if cfg.p_m is not None else 1.0 / net.edge_count
    pop = [random_weights(net, rng) for _ in range(cfg.pop)]
    pts = [evaluate(net, x) for x in pop]
    rank = fast_nondominated_sort(pts)
    crowd = _per_front_crowding(pts, rank)
    if observer is not None:
        observer(0, [pts[i] for i in range(cfg.pop) if rank[i] == 0])

    for gen in range(1, cfg.maxgen + 1):
        offspring = []
        while len(offspring) < cfg.pop:
            i = _tournament(rank, crowd, rng)
            j = _tournament(rank, crowd, rng)
            if rng.random() < cfg.p_c:
                c1, c2 = _sbx_pair(pop[i], pop[j], cfg.eta_c, rng)
            else:
                c1, c2 = pop[i].copy(), pop[j].copy()
            offspring.append(_polynomial_mutation(c1, p_m, cfg.eta_m, rng))
            if len(offspring) < cfg.pop:
                offspring.append(_polynomial_mutation(c2, p_m, cfg.eta_m, rng))
        off_pts = [evaluate(net, x) for x in offspring]

        union = pop + offspring
        union_pts = pts + off_pts
        union_rank = fast_nondominated_sort(union_pts)
        union_crowd = _per_front_crowding(union_pts, union_rank)
        order = sorted(
            range(len(union)), key=lambda t: (union_rank[t], -union_crowd[t])
        )
        keep = order[: cfg.pop]
        pop = [union[t] for t in keep]
        pts = [union_pts[t] for t in keep]
        rank = fast_nondominated_sort(pts)
        crowd = _per_front_crowding(pts, rank)
        if observer is not None:
            observer(gen, [pts[i] for i in range(cfg.pop) if rank[i] == 0])

    return [(pop[i], pts[i]) for i in range(cfg.pop) if rank[i] == 0]


def _per_front_crowding(points, rank) -> list[float]:
    crowd = [0.0] * len(points)
    for level in set(rank):
        idx = [i for i, r in enumerate(rank) if r == level]
        dists = crowding_distances([points[i] for i in idx])
        for i, d in zip(idx, dists):
            crowd[i] = d
    return crowd


# --- engine configurations -------------------------------------------------

def nc_mopso_run(net: Network, cfg: EngineConfig, observer=None) -> Archive:
    """Full algorithm: hybrid initialization plus per-generation local search."""
    local = make_ncls_operator(net, cfg.n_ls) if cfg.n_ls > 0 else None
    return run(net, cfg, init=make_echi_init(cfg.hir), local_search=local, observer=observer)


def mopsocd_run(net: Network, cfg: EngineConfig, observer=None) -> Archive:
    """Plain crowding-distance MOPSO: random init, no local search."""
    return run(net, replace(cfg, hir=0.0, n_ls=0), init=random_init, observer=observer)


def mopsocd_in_run(net: Network, cfg: EngineConfig, observer=None) -> Archive:
    """Ablation variant: hybrid initialization at rate 0.5, no local search."""
    return run(
        net, replace(cfg, hir=0.5, n_ls=0), init=make_echi_init(0.5), observer=observer
    )


ALGORITHMS = {
    "nc-mopso": nc_mopso_run,
    "mopsocd": mopsocd_run,
    "mopsocd-in": mopsocd_in_run,
}
