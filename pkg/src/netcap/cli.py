"""Command-line front end.

Subcommands: generate | optimize | simulate | compare | plotdata. The worker
pool for batch runs is capped by the NETCAP_THREADS environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from netcap import __version__, _kernels
from netcap.baselines import Nsga2Config
from netcap.engine import EngineConfig
from netcap.graph import generate_ba, generate_ws, write_edgelist
from netcap.harness import (
    ALGORITHM_NAMES,
    FMT,
    PRESETS,
    ExperimentSpec,
    compare_results,
    format_compare_report,
    load_result_dir,
    parse_instance,
    run_experiment,
    write_compare_report,
    write_plotdata,
)
from netcap.objectives import LAMBDA_SENTINEL, evaluate
from netcap.sim import ABOVE_GRID, ONSET_GROWTH, SimConfig, simulate


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netcap",
        description="Optimize edge weights for network transport capacity vs. hop count.",
    )
    parser.add_argument("--version", action="version", version=f"netcap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic network as an edge list")
    gen_sub = gen.add_subparsers(dest="model", required=True)
    ba = gen_sub.add_parser("ba", help="scale-free network (preferential attachment)")
    ba.add_argument("--n", type=int, required=True, help="number of nodes")
    ba.add_argument("--m", type=int, required=True, help="edges attached per new node")
    ba.add_argument("--seed", type=int, default=1)
    ba.add_argument("--out", type=Path, required=True)
    ba.set_defaults(func=cmd_generate)
    ws = gen_sub.add_parser("ws", help="small-world network (ring + rewiring)")
    ws.add_argument("--n", type=int, required=True, help="number of nodes")
    ws.add_argument("--k", type=int, required=True, help="ring degree (even)")
    ws.add_argument("--p", type=float, required=True, help="rewiring probability")
    ws.add_argument("--seed", type=int, default=1)
    ws.add_argument("--out", type=Path, required=True)
    ws.set_defaults(func=cmd_generate)

    opt = sub.add_parser("optimize", help="run optimizers and persist fronts")
    opt.add_argument("--instance", required=True,
                     help="'ba:n=..,m=..,seed=..', 'ws:n=..,k=..,p=..,seed=..', or an edge-list path")
    opt.add_argument("--algo", default="nc-mopso",
                     help=f"comma-separated subset of {','.join(ALGORITHM_NAMES)}")
    opt.add_argument("--preset", choices=sorted(PRESETS), help="parameter preset")
    opt.add_argument("--pop", type=int)
    opt.add_argument("--maxgen", type=int)
    opt.add_argument("--c1", type=float)
    opt.add_argument("--c2", type=float)
    opt.add_argument("--omega", type=float)
    opt.add_argument("--hir", type=float, help="heuristic initialization rate in [0,1]")
    opt.add_argument("--nls", type=int, help="local-search neighbors per generation")
    opt.add_argument("--archive", type=int, help="archive capacity (default: pop)")
    opt.add_argument("--pc", type=float, help="NSGA-II crossover probability")
    opt.add_argument("--pm", type=float, help="NSGA-II per-gene mutation probability (default 1/M)")
    opt.add_argument("--runs", type=int, default=1)
    opt.add_argument("--seed", type=int, default=0, help="base seed; run i uses seed+i")
    opt.add_argument("--workers", type=int, help="parallel worker processes")
    opt.add_argument("--out", type=Path, required=True)
    opt.set_defaults(func=cmd_optimize)

    sim = sub.add_parser("simulate", help="packet simulation across a rate grid")
    sim.add_argument("--instance", required=True)
    sim.add_argument("--weights", type=Path,
                     help="weights.json from an optimize run (default: uniform weights)")
    sim.add_argument("--weights-index", type=int, default=0,
                     help="which front entry of the weights file to simulate")
    sim.add_argument("--grid", default="0.05:1.0:20",
                     help="rate grid 'start:stop:count' or comma-separated values")
    sim.add_argument("--steps", type=int, default=5000)
    sim.add_argument("--warmup", type=int, default=500)
    sim.add_argument("--capacity", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", type=Path, required=True)
    sim.set_defaults(func=cmd_simulate)

    cmp_ = sub.add_parser("compare", help="front-quality report over result directories")
    cmp_.add_argument("results", type=Path, help="output directory of an optimize run")
    cmp_.add_argument("--out", type=Path, help="report directory (default: results/compare)")
    cmp_.set_defaults(func=cmd_compare)

    plot = sub.add_parser("plotdata", help="emit CSV bundles for plots")
    plot.add_argument("results", type=Path, help="output directory of an optimize run")
    plot.add_argument("--out", type=Path, help="plot-data directory (default: results/plotdata)")
    plot.set_defaults(func=cmd_plotdata)
    return parser


def cmd_generate(args) -> int:
    if args.model == "ba":
        net = generate_ba(args.n, args.m, args.seed)
        header = f"model=ba n={args.n} m={args.m} seed={args.seed}"
    else:
        net = generate_ws(args.n, args.k, args.p, args.seed)
        header = f"model=ws n={args.n} k={args.k} p={args.p} seed={args.seed}"
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_edgelist(net, args.out, header=header)
    print(
        f"wrote {args.out}: N={net.node_count} M={net.edge_count} "
        f"avg_degree={net.average_degree():.4g}"
    )
    return 0


def _engine_config(args) -> EngineConfig:
    cfg = EngineConfig(seed=args.seed)
    if args.preset:
        cfg = replace(cfg, **PRESETS[args.preset])
    overrides = {}
    for flag, field_name in (
        ("pop", "pop"),
        ("maxgen", "maxgen"),
        ("c1", "c1"),
        ("c2", "c2"),
        ("omega", "omega"),
        ("hir", "hir"),
        ("nls", "n_ls"),
        ("archive", "archive_capacity"),
    ):
        val = getattr(args, flag)
        if val is not None:
            overrides[field_name] = val
    return replace(cfg, **overrides) if overrides else cfg


def cmd_optimize(args) -> int:
    algos = tuple(a.strip() for a in args.algo.split(",") if a.strip())
    engine = _engine_config(args)
    nsga2 = Nsga2Config(pop=engine.pop, maxgen=engine.maxgen, seed=args.seed)
    if args.pc is not None:
        nsga2 = replace(nsga2, p_c=args.pc)
    if args.pm is not None:
        nsga2 = replace(nsga2, p_m=args.pm)
    spec = ExperimentSpec(
        instance=args.instance,
        algorithms=algos,
        engine=engine,
        nsga2=nsga2,
        runs=args.runs,
        seed_base=args.seed,
    )
    paths = run_experiment(spec, args.out, workers=args.workers)
    print(f"backend={_kernels.backend_name()}  wrote {len(paths)} run(s) under {args.out}")
    for p in paths:
        print(f"  {p}")
    return 0


def _parse_grid(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be 'start:stop:count', got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("grid count must be >= 1")
        return [float(v) for v in np.linspace(start, stop, count)]
    vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty rate grid")
    return vals


def cmd_simulate(args) -> int:
    net = parse_instance(args.instance)
    if args.weights:
        with open(args.weights) as fh:
            entries = json.load(fh)["front"]
        if not 0 <= args.weights_index < len(entries):
            raise ValueError(f"weights index {args.weights_index} out of range (front size {len(entries)})")
        w = np.array(entries[args.weights_index]["weights"], dtype=np.float64)
    else:
        w = np.ones(net.edge_count)
    grid = sorted(_parse_grid(args.grid))
    analytic = evaluate(net, w).lambda_c

    args.out.mkdir(parents=True, exist_ok=True)
    empirical = ABOVE_GRID
    with open(args.out / "summary.csv", "w") as fh:
        fh.write("lambda,growth_rate,congested\n")
        for lam in grid:
            if lam > 1.0:
                raise ValueError("generation rates above 1 are outside the Bernoulli model")
            rep = simulate(net, w, SimConfig(
                lam=lam, steps=args.steps, warmup=args.warmup,
                seed=args.seed, capacity=args.capacity,
            ))
            congested = rep.queue_growth_rate > ONSET_GROWTH
            if congested and empirical is ABOVE_GRID:
                empirical = lam
            fh.write(f"{FMT % lam},{FMT % rep.queue_growth_rate},{int(congested)}\n")
            series = args.out / f"series_lam_{FMT % lam}.csv"
            with open(series, "w") as sf:
                sf.write("step,mean_queue,max_queue,delivered_cum\n")
                for i in range(len(rep.steps)):
                    sf.write(
                        f"{rep.steps[i]},{FMT % rep.mean_queue_series[i]},"
                        f"{rep.max_queue_series[i]},{rep.delivered_series[i]}\n"
                    )

    if analytic >= LAMBDA_SENTINEL:
        print("analytic capacity: unbounded (no intermediate node on any routed path)")
    else:
        print(f"analytic capacity:  {analytic:.6g}")
    if empirical is ABOVE_GRID:
        print("empirical onset:    above grid")
    else:
        print(f"empirical onset:    {empirical:.6g}")
    print(f"wrote {args.out}/summary.csv and per-rate series files")
    return 0


def cmd_compare(args) -> int:
    results = load_result_dir(args.results)
    report = compare_results(results)
    out = args.out or (args.results / "compare")
    write_compare_report(report, out)
    print(format_compare_report(report), end="")
    print(f"wrote {out}/report.csv, cmetric.csv, report.txt")
    return 0


def cmd_plotdata(args) -> int:
    results = load_result_dir(args.results)
    out = args.out or (args.results / "plotdata")
    write_plotdata(results, out)
    print(f"wrote plot data under {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
