import numpy as np
import pytest

from netcap.baselines import (
    Nsga2Config,
    fast_nondominated_sort,
    mopsocd_in_run,
    mopsocd_run,
    nc_mopso_run,
    nsga2_run,
)
from netcap.engine import EngineConfig, dominates, random_init, run
from netcap.objectives import LAMBDA_SENTINEL, ObjectivePoint, evaluate
from netcap.operators import make_echi_init


def P(lam, h):
    return ObjectivePoint(lambda_c=lam, h_avg=h)


class TestFastNondominatedSort:
    def test_matches_bruteforce(self):
        rng = np.random.default_rng(0)
        pts = [P(x, y) for x, y in rng.random((30, 2))]
        rank = fast_nondominated_sort(pts)
        # rank 0 iff not dominated by anything
        for i, p in enumerate(pts):
            dominated = any(dominates(q, p) for q in pts)
            assert (rank[i] == 0) == (not dominated)

    def test_rank_orders_are_consistent(self):
        rng = np.random.default_rng(1)
        pts = [P(x, y) for x, y in rng.random((25, 2))]
        rank = fast_nondominated_sort(pts)
        for i, p in enumerate(pts):
            for j, q in enumerate(pts):
                if dominates(q, p):
                    assert rank[i] > rank[j]


class TestNsga2:
    def test_maxgen_zero_returns_initial_rank0(self, cycle4):
        cfg = Nsga2Config(pop=8, maxgen=0, seed=5)
        front = nsga2_run(cycle4, cfg)
        pts = [pt for _, pt in front]
        for p in pts:
            assert not any(dominates(q, p) for q in pts)
        # weights must reproduce their objective points
        for w, pt in front:
            assert evaluate(cycle4, w) == pt

    def test_deterministic(self, cycle4):
        cfg = Nsga2Config(pop=8, maxgen=4, seed=5)
        a = nsga2_run(cycle4, cfg)
        b = nsga2_run(cycle4, cfg)
        assert len(a) == len(b)
        for (wa, pa), (wb, pb) in zip(a, b):
            assert np.array_equal(wa, wb)
            assert pa == pb

    def test_triangle_collapses_to_saturated_point(self, triangle):
        cfg = Nsga2Config(pop=20, maxgen=3, seed=2)
        front = nsga2_run(triangle, cfg)
        assert all(pt == P(LAMBDA_SENTINEL, 0.0) for _, pt in front)

    def test_genes_stay_in_box(self, cycle4):
        cfg = Nsga2Config(pop=10, maxgen=6, seed=7)
        front = nsga2_run(cycle4, cfg)
        for w, _ in front:
            assert np.all(w >= 1e-6) and np.all(w <= 1.0)

    def test_front_mutually_nondominated(self, star5):
        cfg = Nsga2Config(pop=12, maxgen=5, seed=3)
        pts = [pt for _, pt in nsga2_run(star5, cfg)]
        for i, p in enumerate(pts):
            for j, q in enumerate(pts):
                if i != j:
                    assert not dominates(q, p)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            Nsga2Config(pop=7)  # odd
        with pytest.raises(ValueError):
            Nsga2Config(p_c=1.5)

    def test_observer_series_length(self, path4):
        seen = []
        nsga2_run(path4, Nsga2Config(pop=6, maxgen=4, seed=1), observer=lambda g, pts: seen.append(g))
        assert seen == [0, 1, 2, 3, 4]


class TestEngineWiring:
    def test_mopsocd_is_engine_with_plain_config(self, cycle4):
        cfg = EngineConfig(pop=6, maxgen=5, seed=13, hir=0.7, n_ls=3)
        via_wrapper = mopsocd_run(cycle4, cfg)
        from dataclasses import replace

        direct = run(cycle4, replace(cfg, hir=0.0, n_ls=0), init=random_init)
        assert [e.objectives for e in via_wrapper.entries] == [
            e.objectives for e in direct.entries
        ]
        for a, b in zip(via_wrapper.entries, direct.entries):
            assert np.array_equal(a.weights, b.weights)

    def test_mopsocd_in_uses_heuristic_half(self, cycle4):
        cfg = EngineConfig(pop=6, maxgen=5, seed=13)
        via_wrapper = mopsocd_in_run(cycle4, cfg)
        from dataclasses import replace

        direct = run(cycle4, replace(cfg, hir=0.5, n_ls=0), init=make_echi_init(0.5))
        assert [e.objectives for e in via_wrapper.entries] == [
            e.objectives for e in direct.entries
        ]

    def test_nc_mopso_deterministic(self, cycle4):
        cfg = EngineConfig(pop=5, maxgen=4, seed=21, hir=0.5, n_ls=3)
        a = nc_mopso_run(cycle4, cfg)
        b = nc_mopso_run(cycle4, cfg)
        assert [e.objectives for e in a.entries] == [e.objectives for e in b.entries]
