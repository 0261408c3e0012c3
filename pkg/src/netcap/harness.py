"""Experiment orchestration: batch runs, persistence, reports, plot data.

Every run is reproducible from its manifest: the instance is regenerated from
its textual spec and the run seed is ``seed_base + run_id``. Front CSVs are
written with 12 significant digits and are byte-identical across reruns.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from netcap import __version__, _kernels
from netcap.baselines import (
    Nsga2Config,
    mopsocd_in_run,
    mopsocd_run,
    nc_mopso_run,
    nsga2_run,
)
from netcap.engine import EngineConfig
from netcap.graph import Network, generate_ba, generate_ws, load_edgelist
from netcap.metrics import (
    Front,
    c_metric,
    hypervolume,
    igd,
    make_front,
    rank_sum_test,
    reference_front,
    reference_point,
)
from netcap.objectives import LAMBDA_SENTINEL, ObjectivePoint

__all__ = [
    "ALGORITHM_NAMES",
    "PRESETS",
    "ExperimentSpec",
    "ResultRecord",
    "parse_instance",
    "run_single",
    "run_experiment",
    "load_result_dir",
    "compare_results",
    "write_plotdata",
    "max_workers",
]

ALGORITHM_NAMES = ("nc-mopso", "mopsocd", "mopsocd-in", "nsga2")

# engine knob presets; "paper" is the published full budget, "desk" finishes
# in minutes on a laptop
PRESETS = {
    "paper": {"pop": 200, "maxgen": 500, "n_ls": 300, "hir": 0.5},
    "desk": {"pop": 40, "maxgen": 60, "n_ls": 40, "hir": 0.5},
}

FMT = "%.12g"


@dataclass(frozen=True)
class ExperimentSpec:
    instance: str
    algorithms: tuple[str, ...] = ("nc-mopso",)
    engine: EngineConfig = field(default_factory=EngineConfig)
    nsga2: Nsga2Config = field(default_factory=Nsga2Config)
    runs: int = 1
    seed_base: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.algorithms:
            raise ValueError("need at least one algorithm")
        for a in self.algorithms:
            if a not in ALGORITHM_NAMES:
                raise ValueError(f"unknown algorithm {a!r}; choose from {ALGORITHM_NAMES}")


@dataclass
class ResultRecord:
    algorithm: str
    instance: str
    run_id: int
    seed: int
    wall_time: float
    front: list[tuple[np.ndarray, ObjectivePoint]]  # weights + objectives, canonical order
    hv_series: list[float]
    config: dict


def parse_instance(spec: str) -> Network:
    """Build a network from 'ba:n=..,m=..,seed=..', 'ws:n=..,k=..,p=..,seed=..',
    or an edge-list file path."""
    if spec.startswith("ba:") or spec.startswith("ws:"):
        kind, _, args = spec.partition(":")
        kv = {}
        for item in args.split(","):
            if not item:
                continue
            key, _, val = item.partition("=")
            if not val:
                raise ValueError(f"malformed instance parameter {item!r} in {spec!r}")
            kv[key.strip()] = val.strip()
        try:
            if kind == "ba":
                return generate_ba(int(kv["n"]), int(kv["m"]), int(kv.get("seed", 1)))
            return generate_ws(int(kv["n"]), int(kv["k"]), float(kv["p"]), int(kv.get("seed", 1)))
        except KeyError as exc:
            raise ValueError(f"instance {spec!r} is missing parameter {exc}") from exc
    return load_edgelist(spec)


class _ConvergenceRecorder:
    """Collects per-generation objective snapshots; HV is computed afterwards
    against a reference corner covering every snapshot of the run."""

    def __init__(self):
        self.snapshots: list[list[ObjectivePoint]] = []

    def engine_observer(self, gen, swarm, archive):
        self.snapshots.append([e.objectives for e in archive.entries])

    def nsga2_observer(self, gen, points):
        self.snapshots.append(list(points))

    def hv_series(self) -> list[float]:
        pts = [p for snap in self.snapshots for p in snap]
        if not pts:
            return []
        floor = min(p.lambda_c for p in pts)
        ceil = max(p.h_avg for p in pts)
        from netcap.metrics import ReferencePoint

        ref = ReferencePoint(floor, ceil)
        return [hypervolume(make_front(snap), ref) for snap in self.snapshots]


def canonical_front_entries(entries):
    """Nondominated + deduplicated entries in (capacity desc, hops asc) order."""
    pts = [pt for _, pt in entries]
    front = make_front(pts)
    out = []
    for target in front:
        for w, pt in entries:
            if pt == target:
                out.append((w, pt))
                break
    return out


def run_single(spec: ExperimentSpec, algorithm: str, run_id: int) -> ResultRecord:
    net = parse_instance(spec.instance)
    seed = spec.seed_base + run_id
    rec = _ConvergenceRecorder()
    t0 = time.perf_counter()
    if algorithm == "nsga2":
        cfg = replace(spec.nsga2, seed=seed)
        front = nsga2_run(net, cfg, observer=rec.nsga2_observer)
        cfg_dict = asdict(cfg)
    else:
        cfg = replace(spec.engine, seed=seed)
        runner = {"nc-mopso": nc_mopso_run, "mopsocd": mopsocd_run, "mopsocd-in": mopsocd_in_run}[algorithm]
        archive = runner(net, cfg, observer=rec.engine_observer)
        front = [(e.weights, e.objectives) for e in archive.entries]
        cfg_dict = asdict(cfg)
    wall = time.perf_counter() - t0
    return ResultRecord(
        algorithm=algorithm,
        instance=spec.instance,
        run_id=run_id,
        seed=seed,
        wall_time=wall,
        front=canonical_front_entries(front),
        hv_series=rec.hv_series(),
        config=cfg_dict,
    )


def write_record(rec: ResultRecord, out_dir: Path) -> Path:
    run_dir = Path(out_dir) / rec.algorithm / f"run_{rec.run_id:03d}"
    run_dir.mkdir(parents=True, exist_ok=True)
    with open(run_dir / "front.csv", "w") as fh:
        fh.write("lambda_c,h_avg\n")
        for _, pt in rec.front:
            fh.write(f"{FMT % pt.lambda_c},{FMT % pt.h_avg}\n")
    with open(run_dir / "weights.json", "w") as fh:
        json.dump(
            {
                "front": [
                    {
                        "lambda_c": pt.lambda_c,
                        "h_avg": pt.h_avg,
                        "capacity_saturated": pt.lambda_c >= LAMBDA_SENTINEL,
                        "weights": [float(v) for v in w],
                    }
                    for w, pt in rec.front
                ]
            },
            fh,
        )
    with open(run_dir / "manifest.json", "w") as fh:
        json.dump(
            {
                "algorithm": rec.algorithm,
                "instance": rec.instance,
                "run_id": rec.run_id,
                "seed": rec.seed,
                "config": rec.config,
                "wall_time": rec.wall_time,
                "backend": _kernels.backend_name(),
                "version": __version__,
            },
            fh,
            indent=2,
        )
    with open(run_dir / "convergence.csv", "w") as fh:
        fh.write("gen,hv\n")
        for gen, hv in enumerate(rec.hv_series):
            fh.write(f"{gen},{FMT % hv}\n")
    return run_dir


def max_workers(n_tasks: int) -> int:
    cap = os.environ.get("NETCAP_THREADS", "").strip()
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(limit, n_tasks))


def _run_task(args):
    spec, algorithm, run_id = args
    return run_single(spec, algorithm, run_id)


def run_experiment(spec: ExperimentSpec, out_dir, workers: int | None = None) -> list[Path]:
    """Run every (algorithm, run) pair, write records as they finish.

    Independent runs execute in parallel worker processes; results are
    identical to a sequential run because each run owns its seed.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "experiment.json", "w") as fh:
        json.dump(
            {
                "instance": spec.instance,
                "algorithms": list(spec.algorithms),
                "engine": asdict(spec.engine),
                "nsga2": asdict(spec.nsga2),
                "runs": spec.runs,
                "seed_base": spec.seed_base,
            },
            fh,
            indent=2,
        )
    tasks = [(spec, algo, run_id) for algo in spec.algorithms for run_id in range(spec.runs)]
    n_workers = max_workers(len(tasks)) if workers is None else workers
    paths = []
    if n_workers <= 1:
        for task in tasks:
            paths.append(write_record(_run_task(task), out_dir))
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            for rec in pool.map(_run_task, tasks):
                paths.append(write_record(rec, out_dir))
    return paths


# --- reading + reports -------------------------------------------------------


def load_front_csv(path) -> Front:
    pts = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "lambda_c,h_avg":
            raise ValueError(f"{path}: unexpected front header {header!r}")
        for line in fh:
            lam, h = line.strip().split(",")
            pts.append(ObjectivePoint(lambda_c=float(lam), h_avg=float(h)))
    return make_front(pts)


def load_result_dir(root) -> dict[str, dict]:
    """Map algorithm -> {"fronts": [Front per run], "instance": str, "runs": [run dirs]}."""
    root = Path(root)
    found: dict[str, dict] = {}
    for algo_dir in sorted(root.iterdir()):
        if not algo_dir.is_dir():
            continue
        run_dirs = sorted(d for d in algo_dir.iterdir() if d.is_dir() and (d / "front.csv").exists())
        if not run_dirs:
            continue
        fronts, instances = [], set()
        for rd in run_dirs:
            fronts.append(load_front_csv(rd / "front.csv"))
            with open(rd / "manifest.json") as fh:
                instances.add(json.load(fh)["instance"])
        if len(instances) != 1:
            raise ValueError(f"{algo_dir}: mixed instances {instances}")
        found[algo_dir.name] = {
            "fronts": fronts,
            "instance": instances.pop(),
            "runs": run_dirs,
        }
    if not found:
        raise ValueError(f"{root}: no result directories found")
    instances = {v["instance"] for v in found.values()}
    if len(instances) != 1:
        raise ValueError(f"cannot compare results from different instances: {instances}")
    return found


def compare_results(results: dict[str, dict], reference_algorithm: str | None = None) -> dict:
    """Front-quality report over one instance.

    The truth front and the reference corner are built from the union of all
    runs of all algorithms. Rank-sum flags mark each algorithm against the
    reference algorithm (nc-mopso when present): dagger = reference better,
    section sign = reference worse, almost-equal = not significant at 5%.
    """
    all_fronts = [f for v in results.values() for f in v["fronts"]]
    truth = reference_front(all_fronts)
    ref = reference_point(all_fronts)
    if reference_algorithm is None:
        reference_algorithm = "nc-mopso" if "nc-mopso" in results else next(iter(results))

    report: dict = {
        "reference_front_size": len(truth),
        "reference_point": (ref.lambda_c_floor, ref.h_avg_ceiling),
        "reference_algorithm": reference_algorithm,
        "instance": next(iter(results.values()))["instance"],
        "algorithms": {},
        "cmetric_pairs": {},
    }
    samples: dict[str, dict[str, list[float]]] = {}
    for name, data in results.items():
        hv = [hypervolume(f, ref) for f in data["fronts"]]
        ig = [igd(f, truth) for f in data["fronts"]]
        cm = [c_metric(truth, f) for f in data["fronts"]]
        samples[name] = {"hv": hv, "igd": ig, "cmetric_ref": cm}
        report["algorithms"][name] = {
            "runs": len(hv),
            "hv_mean": float(np.mean(hv)),
            "hv_std": float(np.std(hv)),
            "igd_mean": float(np.mean(ig)),
            "igd_std": float(np.std(ig)),
            "cmetric_ref_mean": float(np.mean(cm)),
            "per_run": samples[name],
        }

    ref_samples = samples[reference_algorithm]
    for name, vals in samples.items():
        if name == reference_algorithm:
            continue
        flags = {}
        pvals = {}
        for metric, better_is_high in (("hv", True), ("igd", False)):
            a, b = ref_samples[metric], vals[metric]
            if min(len(a), len(b)) >= 5:
                _, p = rank_sum_test(a, b)
            else:
                p = 1.0
            pvals[metric] = p
            ref_better = (np.mean(a) > np.mean(b)) == better_is_high
            flags[metric] = "≈" if p >= 0.05 else ("†" if ref_better else "§")
        report["algorithms"][name]["flags_vs_reference"] = flags
        report["algorithms"][name]["p_vs_reference"] = pvals

    names = sorted(results)
    for a in names:
        for b in names:
            if a == b:
                continue
            pairs = [
                c_metric(fa, fb)
                for fa, fb in zip(results[a]["fronts"], results[b]["fronts"])
            ]
            report["cmetric_pairs"][f"{a}|{b}"] = float(np.mean(pairs))
    return report


def write_compare_report(report: dict, out_dir) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "report.csv", "w") as fh:
        fh.write("algorithm,runs,hv_mean,hv_std,igd_mean,igd_std,cmetric_ref_mean,hv_flag,igd_flag\n")
        for name, a in report["algorithms"].items():
            flags = a.get("flags_vs_reference", {})
            fh.write(
                f"{name},{a['runs']},{FMT % a['hv_mean']},{FMT % a['hv_std']},"
                f"{FMT % a['igd_mean']},{FMT % a['igd_std']},{FMT % a['cmetric_ref_mean']},"
                f"{flags.get('hv', '')},{flags.get('igd', '')}\n"
            )
    with open(out_dir / "cmetric.csv", "w") as fh:
        fh.write("front_a,front_b,mean_coverage\n")
        for pair, val in report["cmetric_pairs"].items():
            a, b = pair.split("|")
            fh.write(f"{a},{b},{FMT % val}\n")
    with open(out_dir / "report.txt", "w") as fh:
        fh.write(format_compare_report(report))


def format_compare_report(report: dict) -> str:
    lines = [
        f"instance:          {report['instance']}",
        f"reference front:   {report['reference_front_size']} points",
        f"reference corner:  capacity floor {FMT % report['reference_point'][0]}, "
        f"hops ceiling {FMT % report['reference_point'][1]}",
        f"flags: {report['reference_algorithm']} is † better / § worse / ≈ similar (rank-sum, 5% level)",
        "",
        f"{'algorithm':<12} {'runs':>4}  {'HV mean(std)':<22} {'IGD mean(std)':<22} {'C(ref,.)':>8}  {'HV':^3} {'IGD':^3}",
    ]
    for name, a in report["algorithms"].items():
        flags = a.get("flags_vs_reference", {})
        hv = f"{a['hv_mean']:.6g} ({a['hv_std']:.3g})"
        ig = f"{a['igd_mean']:.6g} ({a['igd_std']:.3g})"
        lines.append(
            f"{name:<12} {a['runs']:>4}  {hv:<22} {ig:<22} "
            f"{a['cmetric_ref_mean']:>8.4g}  {flags.get('hv', ' '):^3} {flags.get('igd', ' '):^3}"
        )
    return "\n".join(lines) + "\n"


def write_plotdata(results: dict[str, dict], out_dir) -> None:
    """Emit front scatters, per-run metric samples, and HV convergence series."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = compare_results(results)

    with open(out_dir / "front_scatter.csv", "w") as fh:
        fh.write("algorithm,run_id,lambda_c,h_avg\n")
        for name, data in results.items():
            for run_id, front in enumerate(data["fronts"]):
                for p in front:
                    fh.write(f"{name},{run_id},{FMT % p.lambda_c},{FMT % p.h_avg}\n")

    for metric in ("hv", "igd", "cmetric_ref"):
        with open(out_dir / f"boxplot_{metric}.csv", "w") as fh:
            fh.write("algorithm,run_id,value\n")
            for name, a in report["algorithms"].items():
                for run_id, val in enumerate(a["per_run"][metric]):
                    fh.write(f"{name},{run_id},{FMT % val}\n")

    with open(out_dir / "convergence.csv", "w") as fh:
        fh.write("algorithm,run_id,gen,hv\n")
        for name, data in results.items():
            for run_id, run_dir in enumerate(data["runs"]):
                conv = Path(run_dir) / "convergence.csv"
                if not conv.exists():
                    continue
                with open(conv) as src:
                    src.readline()
                    for line in src:
                        gen, hv = line.strip().split(",")
                        fh.write(f"{name},{run_id},{gen},{hv}\n")
