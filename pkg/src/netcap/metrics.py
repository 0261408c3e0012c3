"""Front-quality indicators and the statistical test used for comparisons.

Objective conventions throughout: capacity is maximized, hops are minimized.
Hypervolume is computed in raw objective units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from netcap.engine import dominates
from netcap.objectives import ObjectivePoint

__all__ = [
    "Front",
    "ReferencePoint",
    "make_front",
    "hypervolume",
    "igd",
    "c_metric",
    "reference_front",
    "reference_point",
    "rank_sum_test",
]

DEDUP_RTOL = 1e-12


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= DEDUP_RTOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class Front:
    """A mutually nondominated, deduplicated set of objective points.

    Canonically ordered (capacity descending, hops ascending) so construction
    is invariant to input ordering.
    """

    points: tuple[ObjectivePoint, ...]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class ReferencePoint:
    lambda_c_floor: float
    h_avg_ceiling: float


def make_front(points: Iterable[ObjectivePoint]) -> Front:
    """Filter to the nondominated subset, deduplicate, canonically order."""
    pts = list(points)
    keep: list[ObjectivePoint] = []
    for i, p in enumerate(pts):
        if any(dominates(q, p) for j, q in enumerate(pts) if j != i):
            continue
        if any(_close(p.lambda_c, q.lambda_c) and _close(p.h_avg, q.h_avg) for q in keep):
            continue
        keep.append(p)
    keep.sort(key=lambda p: (-p.lambda_c, p.h_avg))
    return Front(points=tuple(keep))


def hypervolume(front: Front, ref: ReferencePoint) -> float:
    """Area dominated by the front inside the reference box.

    Standard two-objective staircase sweep: points sorted by capacity
    descending; each contributes a strip down to the next point's capacity
    (the floor for the last), with height ceiling minus its hop count.
    Raises when any point falls outside the reference box.
    """
    for p in front:
        if p.lambda_c < ref.lambda_c_floor or p.h_avg > ref.h_avg_ceiling:
            raise ValueError(f"front point {p} falls outside the reference box {ref}")
    pts = sorted(front, key=lambda p: (-p.lambda_c, p.h_avg))
    area = 0.0
    best_h = math.inf
    for i, p in enumerate(pts):
        lam_next = pts[i + 1].lambda_c if i + 1 < len(pts) else ref.lambda_c_floor
        best_h = min(best_h, p.h_avg)
        area += (p.lambda_c - lam_next) * (ref.h_avg_ceiling - best_h)
    return area


def igd(approx: Front, truth: Front) -> float:
    """Mean distance from each truth point to its nearest approximation point."""
    if len(approx) == 0:
        raise ValueError("approximation front is empty")
    if len(truth) == 0:
        raise ValueError("truth front is empty")
    a = np.array([(p.lambda_c, p.h_avg) for p in approx])
    t = np.array([(p.lambda_c, p.h_avg) for p in truth])
    d = np.sqrt(((t[:, None, :] - a[None, :, :]) ** 2).sum(axis=2))
    return float(d.min(axis=1).mean())


def c_metric(p: Front, q: Front) -> float:
    """Fraction of q's points dominated by at least one point of p."""
    if len(q) == 0:
        raise ValueError("second front is empty")
    covered = sum(1 for b in q if any(dominates(a, b) for a in p))
    return covered / len(q)


def reference_front(fronts: Sequence[Front]) -> Front:
    """Nondominated filter over the union of the given fronts."""
    pts = [p for f in fronts for p in f]
    if not pts:
        raise ValueError("all fronts are empty")
    return make_front(pts)


def reference_point(fronts: Sequence[Front]) -> ReferencePoint:
    """Reference corner (worst capacity, worst hops) over the compared fronts."""
    pts = [p for f in fronts for p in f]
    if not pts:
        raise ValueError("all fronts are empty")
    return ReferencePoint(
        lambda_c_floor=min(p.lambda_c for p in pts),
        h_avg_ceiling=max(p.h_avg for p in pts),
    )


def rank_sum_test(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Two-sided Wilcoxon rank-sum test.

    Uses exact enumeration of the rank-sum distribution when both samples
    have at most 10 values and no ties straddle the samples; otherwise a
    normal approximation with midranks and tie correction. Samples that are
    all one identical value give (0.0, 1.0). Requires at least 5 values per
    sample.
    """
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    if len(a) < 5 or len(b) < 5:
        raise ValueError("each sample needs at least 5 values")
    n1, n2 = len(a), len(b)
    pooled = a + b
    if all(x == pooled[0] for x in pooled):
        return 0.0, 1.0

    order = sorted(range(n1 + n2), key=lambda i: pooled[i])
    ranks = [0.0] * (n1 + n2)
    tie_term = 0.0
    has_ties = False
    i = 0
    while i < n1 + n2:
        j = i
        while j + 1 < n1 + n2 and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        t = j - i + 1
        if t > 1:
            has_ties = True
            tie_term += t * (t * t - 1.0)
        i = j + 1

    w = sum(ranks[:n1])
    n = n1 + n2
    mean = n1 * (n + 1) / 2.0
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    z = 0.0 if var <= 0.0 else (w - mean) / math.sqrt(var)

    if not has_ties and max(n1, n2) <= 10:
        p = _exact_rank_sum_p(n1, n2, w)
    else:
        p = 1.0 if var <= 0.0 else 2.0 * _normal_sf(abs(z))
    return z, min(p, 1.0)


def _exact_rank_sum_p(n1: int, n2: int, w: float) -> float:
    """Exact two-sided p: enumerate counts of n1-subsets of ranks 1..n by sum."""
    n = n1 + n2
    max_sum = n1 * n + 10
    # count[k][s] = number of k-subsets of {1..r} summing to s, built up over r
    count = [[0] * (max_sum + 1) for _ in range(n1 + 1)]
    count[0][0] = 1
    for r in range(1, n + 1):
        for k in range(min(r, n1), 0, -1):
            row_k, row_km1 = count[k], count[k - 1]
            for s in range(max_sum, r - 1, -1):
                if row_km1[s - r]:
                    row_k[s] += row_km1[s - r]
    total = math.comb(n, n1)
    dist = count[n1]
    mean = n1 * (n + 1) / 2.0
    # two-sided: double the smaller tail (including w itself)
    w_int = int(round(w))
    lo_tail = sum(dist[: w_int + 1])
    hi_tail = sum(dist[w_int:])
    p = 2.0 * min(lo_tail, hi_tail) / total
    return min(p, 1.0)


def _normal_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))
