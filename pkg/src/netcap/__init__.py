"""netcap: edge-weight optimization of network transport.

Jointly maximizes transport capacity and minimizes average hop count under
smallest-weight-path routing by tuning edge weights, using a centrality-guided
multi-objective particle swarm plus baselines, front-quality metrics, and a
packet-level simulator for validating the analytic congestion threshold.
"""

from netcap._kernels import backend_name
from netcap.graph import Network, generate_ba, generate_ws, load_edgelist, write_edgelist
from netcap.objectives import (
    LAMBDA_SENTINEL,
    BetweennessResult,
    ObjectivePoint,
    evaluate,
    nbec,
    routing_betweenness,
)

__version__ = "0.1.0"


def __getattr__(name):
    # heavier subsystems load lazily so `import netcap` stays cheap
    if name in ("EngineConfig", "Archive", "run", "dominates"):
        from netcap import engine

        return getattr(engine, name)
    if name in ("Nsga2Config", "nsga2_run", "nc_mopso_run", "mopsocd_run", "mopsocd_in_run"):
        from netcap import baselines

        return getattr(baselines, name)
    if name in ("hypervolume", "igd", "c_metric", "make_front", "rank_sum_test"):
        from netcap import metrics

        return getattr(metrics, name)
    if name in ("SimConfig", "simulate", "estimate_lambda_c", "build_routing_tables"):
        from netcap import sim

        return getattr(sim, name)
    raise AttributeError(f"module 'netcap' has no attribute {name!r}")


__all__ = [
    "Network",
    "generate_ba",
    "generate_ws",
    "load_edgelist",
    "write_edgelist",
    "LAMBDA_SENTINEL",
    "BetweennessResult",
    "ObjectivePoint",
    "routing_betweenness",
    "evaluate",
    "nbec",
    "backend_name",
    "EngineConfig",
    "Archive",
    "run",
    "dominates",
    "Nsga2Config",
    "nsga2_run",
    "nc_mopso_run",
    "mopsocd_run",
    "mopsocd_in_run",
    "hypervolume",
    "igd",
    "c_metric",
    "make_front",
    "rank_sum_test",
    "SimConfig",
    "simulate",
    "estimate_lambda_c",
    "build_routing_tables",
    "__version__",
]
