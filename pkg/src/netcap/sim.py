"""Discrete-time packet simulator for validating the analytic capacity.

Model, per time step:

* generation -- every node creates a packet with probability ``lam``
  (Bernoulli, so ``lam <= 1``) addressed to a uniformly random other node.
  The source routes its own packet out immediately: it is delivered on the
  spot when the first hop is already the destination, otherwise it joins the
  tail of the first hop's queue. Node capacity is therefore consumed by
  transit forwarding only, which is what the betweenness-based threshold
  (capacity = (N-1)/B_max) describes.
* forwarding -- nodes are processed in id order; each dequeues up to
  ``capacity`` packets (FIFO) and hands each to its next hop: appended to
  that queue's tail, or absorbed when the next hop is the destination.
  A packet that arrives during the current step is forwarded in the same
  step only if it has reached the head of its queue.

Routing is deterministic single-path: the lowest-id next hop on a
smallest-weight path. (Analytic betweenness splits tied paths fractionally;
on heavily tied instances the simulated onset can deviate accordingly.)
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from netcap import _kernels
from netcap.graph import Network

__all__ = [
    "ABOVE_GRID",
    "ONSET_GROWTH",
    "SimConfig",
    "SimReport",
    "build_routing_tables",
    "simulate",
    "estimate_lambda_c",
]

# Sentinel for "no grid point congested".
ABOVE_GRID = math.inf
# A run counts as congested when the queue total grows faster than this.
ONSET_GROWTH = 0.1


@dataclass(frozen=True)
class SimConfig:
    lam: float = 0.1  # packets per node per step
    steps: int = 5000
    warmup: int = 500
    seed: int = 0
    capacity: int = 1  # packets a node may forward per step
    record_trace: bool = False

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("generation rate must be in [0, 1] (Bernoulli model)")
        if not self.steps > self.warmup >= 0:
            raise ValueError("need steps > warmup >= 0")
        if self.capacity < 1:
            raise ValueError("capacity must be >= 1")


@dataclass
class SimReport:
    generated: int
    delivered: int
    mean_queue_series: np.ndarray  # per recorded step, mean queue length
    max_queue_node: int
    queue_growth_rate: float  # LS slope of total queued packets vs step, post-warmup
    steps: np.ndarray
    total_queue_series: np.ndarray
    max_queue_series: np.ndarray
    delivered_series: np.ndarray
    generated_series: np.ndarray
    trace: list = field(default_factory=list)


def build_routing_tables(net: Network, x) -> np.ndarray:
    """table[u, t] = next hop from u toward t (lowest id on ties); table[t, t] = -1."""
    w = net.check_weights(x)
    return _kernels.next_hop_table(net.indptr, net.nbr_nodes, net.nbr_edges, w, net.node_count)


def simulate(net: Network, x, cfg: SimConfig) -> SimReport:
    """Run the packet model and report queue statistics after warmup."""
    table = build_routing_tables(net, x)
    n = net.node_count
    rng = np.random.default_rng(cfg.seed)
    queues: list[deque] = [deque() for _ in range(n)]
    generated = delivered = 0
    next_id = 0
    trace = []

    n_rec = cfg.steps - cfg.warmup
    rec_steps = np.empty(n_rec, dtype=np.int64)
    rec_total = np.empty(n_rec, dtype=np.int64)
    rec_max = np.empty(n_rec, dtype=np.int64)
    rec_delivered = np.empty(n_rec, dtype=np.int64)
    rec_generated = np.empty(n_rec, dtype=np.int64)
    total_queued = 0

    for step in range(cfg.steps):
        # generation: the source hands its packet straight to the first hop
        if cfg.lam > 0.0:
            for src in np.flatnonzero(rng.random(n) < cfg.lam):
                src = int(src)
                dest = int(rng.integers(n - 1))
                if dest >= src:
                    dest += 1
                generated += 1
                pid = next_id
                next_id += 1
                hop = int(table[src, dest])
                if hop == dest:
                    delivered += 1
                else:
                    queues[hop].append((dest, pid))
                    total_queued += 1
                    if cfg.record_trace:
                        trace.append(("arrive", hop, pid))

        # forwarding, nodes in id order
        for u in range(n):
            q = queues[u]
            for _ in range(cfg.capacity):
                if not q:
                    break
                dest, pid = q.popleft()
                total_queued -= 1
                if cfg.record_trace:
                    trace.append(("depart", u, pid))
                hop = int(table[u, dest])
                if hop == dest:
                    delivered += 1
                else:
                    queues[hop].append((dest, pid))
                    total_queued += 1
                    if cfg.record_trace:
                        trace.append(("arrive", hop, pid))

        assert generated == delivered + total_queued
        if step >= cfg.warmup:
            i = step - cfg.warmup
            rec_steps[i] = step
            rec_total[i] = total_queued
            rec_max[i] = max(len(q) for q in queues)
            rec_delivered[i] = delivered
            rec_generated[i] = generated

    if n_rec >= 2 and rec_total.max() != rec_total.min():
        slope = float(np.polyfit(rec_steps.astype(float), rec_total.astype(float), 1)[0])
    else:
        slope = 0.0
    lengths = np.array([len(q) for q in queues])
    return SimReport(
        generated=generated,
        delivered=delivered,
        mean_queue_series=rec_total / n,
        max_queue_node=int(np.argmax(lengths)),
        queue_growth_rate=slope,
        steps=rec_steps,
        total_queue_series=rec_total,
        max_queue_series=rec_max,
        delivered_series=rec_delivered,
        generated_series=rec_generated,
        trace=trace,
    )


def estimate_lambda_c(net: Network, x, grid, cfg: SimConfig) -> float:
    """Smallest grid rate whose queue growth exceeds ONSET_GROWTH.

    Returns ABOVE_GRID (infinity) when no grid point congests. The grid must
    be sorted ascending.
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("rate grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("rate grid must be sorted ascending")
    for lam in grid:
        report = simulate(net, x, replace(cfg, lam=lam))
        if report.queue_growth_rate > ONSET_GROWTH:
            return lam
    return ABOVE_GRID
