"""The four canned experiments, generic sweeps, CSV emission, and
cross-seed aggregation. Aggregates are always re-derived from the run CSVs
so they stay exact summaries of what was written to disk."""

from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .engine import (
    ContentConfig,
    DemandConfig,
    GroupSpec,
    MetricsSeries,
    RoutingConfig,
    ScenarioConfig,
    run,
)
from .scenario import resolved_dict

KINDS = ("capacity-tiers", "free-riders", "strategies", "interest-routing", "custom")

RUN_HEADER = ["iteration", "node", "requested", "received", "served", "queries"]
QUERY_HEADER = ["iteration", "node", "mode", "trials", "probes"]
CAPACITY_HEADER = ["node", "review", "shared", "action", "download"]
ALLOC_HEADER = ["iteration", "node", "pending", "selected", "granted",
                "utilization", "gain"]
REPUTATION_HEADER = ["iteration", "owner", "peer", "score", "n_obs"]
NEIGHBOR_HEADER = ["iteration", "owner", "position", "peer", "score"]
AGG_HEADER = ["kind", "sweep", "metric", "mean", "std", "n"]

TIER_WINDOW = 25  # iterations per received-data window in the tier metrics


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def read_csv(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# canned scenarios


def capacity_tiers_config(seed: int) -> ScenarioConfig:
    """One 200-node network split into three fixed shared-capacity tiers."""
    return ScenarioConfig(
        iterations=500,
        acquaintance=50,
        seed=seed,
        groups=[
            GroupSpec(count=67, label="low", shared=4.0),
            GroupSpec(count=67, label="mid", shared=10.0),
            GroupSpec(count=66, label="high", shared=20.0),
        ],
        demand=DemandConfig(low=5, high=15),
    )


def free_riders_config(pct: int, seed: int) -> ScenarioConfig:
    """200 nodes with the given percentage contributing nothing."""
    n_free = round(200 * pct / 100)
    return ScenarioConfig(
        iterations=500,
        acquaintance=50,
        seed=seed,
        groups=[
            GroupSpec(count=200 - n_free, label="contributor", shared=10.0),
            GroupSpec(count=n_free, label="free-rider", shared=0.0,
                      strategy="free-rider"),
        ],
        demand=DemandConfig(low=5, high=15),
    )


def strategies_config(seed: int) -> ScenarioConfig:
    """Honest requesters next to two over-requesting populations."""
    return ScenarioConfig(
        iterations=500,
        acquaintance=50,
        seed=seed,
        groups=[
            GroupSpec(count=100, label="BS", shared=8.0),
            GroupSpec(count=50, label="GS1", shared=8.0,
                      strategy="over-requester", multiplier=2.0),
            GroupSpec(count=50, label="GS2", shared=8.0,
                      strategy="over-requester", multiplier=4.0),
        ],
        demand=DemandConfig(low=5, high=15),
    )


def interest_routing_config(seed: int) -> ScenarioConfig:
    """1000 nodes with a category catalog; query trials compare ranked
    probing against uniform probing on the same network."""
    return ScenarioConfig(
        iterations=160,
        acquaintance=30,
        seed=seed,
        groups=[GroupSpec(count=1000, label="peer", shared=10.0)],
        demand=DemandConfig(low=5, high=15),
        content=ContentConfig(catalog=2000, categories=20, interests=2,
                              holdings=30),
        routing=RoutingConfig(rank_refresh=10, ttl=150, trial_nodes=25,
                              measure_from=100),
    )


# ---------------------------------------------------------------------------
# experiment planning and execution


@dataclass
class ExperimentSpec:
    kind: str
    seeds: list[int]
    out_dir: Path
    sweep_name: str = ""  # dotted config path, custom kind only
    sweep_values: list = field(default_factory=list)
    scenario: ScenarioConfig | None = None  # base config, custom kind only
    jobs: int = 1

    def validate(self) -> list[str]:
        problems = []
        if self.kind not in KINDS:
            problems.append(f"unknown experiment kind {self.kind!r}")
        if not self.seeds:
            problems.append("at least one seed is required")
        if self.sweep_name and not self.sweep_values:
            problems.append("sweep declared without values")
        if self.kind == "custom" and self.scenario is None:
            problems.append("custom experiments need a base --scenario")
        return problems


@dataclass
class RunJob:
    kind: str
    sweep: str
    seed: int
    config: ScenarioConfig


def _apply_override(config: ScenarioConfig, dotted: str, value) -> ScenarioConfig:
    config = dataclasses.replace(config)
    target = config
    parts = dotted.split(".")
    for part in parts[:-1]:
        inner = dataclasses.replace(getattr(target, part))
        setattr(target, part, inner)
        target = inner
    leaf = parts[-1]
    old = getattr(target, leaf)
    setattr(target, leaf, type(old)(value) if old is not None else value)
    return config


def plan_runs(spec: ExperimentSpec) -> list[RunJob]:
    jobs = []
    if spec.kind == "capacity-tiers":
        for seed in spec.seeds:
            jobs.append(RunJob(spec.kind, "tiers", seed, capacity_tiers_config(seed)))
    elif spec.kind == "free-riders":
        values = spec.sweep_values or [5, 10, 20, 30]
        for pct in values:
            for seed in spec.seeds:
                jobs.append(RunJob(spec.kind, str(pct), seed,
                                   free_riders_config(int(pct), seed)))
    elif spec.kind == "strategies":
        for seed in spec.seeds:
            jobs.append(RunJob(spec.kind, "mixed", seed, strategies_config(seed)))
    elif spec.kind == "interest-routing":
        for seed in spec.seeds:
            jobs.append(RunJob(spec.kind, "net", seed, interest_routing_config(seed)))
    else:  # custom
        base = spec.scenario
        if spec.sweep_name:
            for value in spec.sweep_values:
                cfg = _apply_override(base, spec.sweep_name, value)
                for seed in spec.seeds:
                    cfg_seeded = dataclasses.replace(cfg, seed=seed)
                    jobs.append(RunJob(spec.kind, str(value), seed, cfg_seeded))
        else:
            for seed in spec.seeds:
                jobs.append(RunJob(spec.kind, "base", seed,
                                   dataclasses.replace(base, seed=seed)))
    return jobs


def _file_stem(job: RunJob) -> str:
    sweep = str(job.sweep).replace("/", "-").replace(" ", "_")
    return f"{job.kind}__{sweep}__s{job.seed}"


def write_series(series: MetricsSeries, out_dir: Path, stem: str) -> dict[str, str]:
    """Emit one run's CSV files; returns the file map (relative names)."""
    files = {"run": f"{stem}.csv"}
    write_csv(out_dir / files["run"], RUN_HEADER, series.node_rows)
    if series.query_rows:
        files["queries"] = f"{stem}__queries.csv"
        write_csv(out_dir / files["queries"], QUERY_HEADER, series.query_rows)
    if series.capacity_rows:
        files["capacity"] = f"{stem}__capacity.csv"
        write_csv(out_dir / files["capacity"], CAPACITY_HEADER, series.capacity_rows)
    if series.alloc_rows:
        files["alloc"] = f"{stem}__alloc.csv"
        write_csv(out_dir / files["alloc"], ALLOC_HEADER, series.alloc_rows)
    if series.reputation_rows:
        files["reputation"] = f"{stem}__reputation.csv"
        write_csv(out_dir / files["reputation"], REPUTATION_HEADER,
                  series.reputation_rows)
    if series.neighbor_rows:
        files["neighbors"] = f"{stem}__neighbors.csv"
        write_csv(out_dir / files["neighbors"], NEIGHBOR_HEADER,
                  series.neighbor_rows)
    return files


def _execute_job(args: tuple[RunJob, str]) -> dict:
    job, runs_dir = args
    series = run(job.config)
    files = write_series(series, Path(runs_dir), _file_stem(job))
    groups = []
    start = 0
    for g in job.config.groups:
        groups.append({
            "label": g.label, "start": start, "count": g.count,
            "strategy": g.strategy, "shared": g.shared,
            "multiplier": g.multiplier,
        })
        start += g.count
    return {
        "kind": job.kind,
        "sweep": job.sweep,
        "seed": job.seed,
        "files": files,
        "groups": groups,
        "acquaintance": job.config.acquaintance,
        "iterations": job.config.iterations,
        "ttl": job.config.routing.ttl,
    }


# ---------------------------------------------------------------------------
# per-run metric derivation (reads the CSVs back; keeps aggregates exact)


def _node_group(groups: list[dict]) -> dict[int, dict]:
    out = {}
    for g in groups:
        for nid in range(g["start"], g["start"] + g["count"]):
            out[nid] = g
    return out


def derive_metrics(run_info: dict, runs_dir: Path) -> dict[tuple[str, str], float]:
    """(sweep, metric) -> value for one finished run, from its CSV files."""
    kind = run_info["kind"]
    acq = run_info["acquaintance"]
    rows = read_csv(runs_dir / run_info["files"]["run"])
    by_group = _node_group(run_info["groups"])
    metrics: dict[tuple[str, str], float] = {}

    def received_mean(selector) -> float:
        total = count = 0
        for r in rows:
            if int(r["iteration"]) >= acq and selector(int(r["node"])):
                total += int(r["received"])
                count += 1
        return total / count if count else 0.0

    if kind == "capacity-tiers":
        labels = sorted({g["label"] for g in run_info["groups"]})
        for label in labels:
            metrics[(label, "received_mean")] = received_mean(
                lambda n, lab=label: by_group[n]["label"] == lab)
        iters = run_info["iterations"]
        for start in range(acq, iters, TIER_WINDOW):
            stop = min(start + TIER_WINDOW, iters)
            for label in labels:
                total = count = 0
                for r in rows:
                    it = int(r["iteration"])
                    if start <= it < stop and by_group[int(r["node"])]["label"] == label:
                        total += int(r["received"])
                        count += 1
                metrics[(label, f"received_w{start:03d}")] = (
                    total / count if count else 0.0)
    elif kind == "free-riders":
        sweep = run_info["sweep"]
        metrics[(sweep, "contributor_perf")] = received_mean(
            lambda n: by_group[n]["strategy"] != "free-rider")
        metrics[(sweep, "free_rider_perf")] = received_mean(
            lambda n: by_group[n]["strategy"] == "free-rider")
    elif kind == "strategies":
        for label in sorted({g["label"] for g in run_info["groups"]}):
            metrics[(label, "received_mean")] = received_mean(
                lambda n, lab=label: by_group[n]["label"] == lab)
    elif kind == "interest-routing":
        qrows = read_csv(runs_dir / run_info["files"]["queries"])
        ttl = run_info["ttl"]
        for mode in ("interest", "baseline"):
            sub = [r for r in qrows if r["mode"] == mode]
            trials = sum(int(r["trials"]) for r in sub)
            probes = sum(int(r["probes"]) for r in sub)
            resolved = sum(int(r["trials"]) for r in sub if int(r["probes"]) < ttl)
            metrics[(mode, "probes_mean")] = probes / trials if trials else 0.0
            metrics[(mode, "resolved_rate")] = resolved / trials if trials else 0.0
    else:  # custom
        sweep = run_info["sweep"]
        metrics[(sweep, "received_mean")] = received_mean(lambda n: True)
        for label in sorted({g["label"] for g in run_info["groups"] if g["label"]}):
            metrics[(f"{sweep}:{label}", "received_mean")] = received_mean(
                lambda n, lab=label: by_group[n]["label"] == lab)
    return metrics


def aggregate_runs(kind: str, run_infos: list[dict], runs_dir: Path) -> list[tuple]:
    """Mean +- stddev across seeds for every (sweep, metric) pair."""
    values: dict[tuple[str, str], list[float]] = {}
    for info in run_infos:
        for key, value in derive_metrics(info, runs_dir).items():
            values.setdefault(key, []).append(value)
    rows = []
    for (sweep, metric), vals in sorted(values.items()):
        arr = np.asarray(vals, dtype=float)
        std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
        rows.append((kind, sweep, metric, float(arr.mean()), std, len(arr)))
    return rows


def run_experiment(spec: ExperimentSpec) -> dict:
    """Execute every (sweep value, seed) run, write per-run CSVs, the
    aggregate CSV, and the manifest; returns the manifest dict."""
    problems = spec.validate()
    if problems:
        raise ValueError("invalid experiment spec: " + "; ".join(problems))
    out_dir = Path(spec.out_dir)
    runs_dir = out_dir / "runs"
    runs_dir.mkdir(parents=True, exist_ok=True)

    jobs = plan_runs(spec)
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            run_infos = list(pool.map(_execute_job,
                                      [(j, str(runs_dir)) for j in jobs]))
    else:
        run_infos = [_execute_job((j, str(runs_dir))) for j in jobs]

    agg_rows = aggregate_runs(spec.kind, run_infos, runs_dir)
    agg_path = out_dir / "aggregate.csv"
    write_csv(agg_path, AGG_HEADER, agg_rows)

    configs = {}
    for job in jobs:
        configs.setdefault(job.sweep, resolved_dict(job.config))
    manifest = {
        "version": __version__,
        "kind": spec.kind,
        "seeds": list(spec.seeds),
        "sweep": {"name": spec.sweep_name,
                  "values": [str(v) for v in spec.sweep_values]},
        "runs": run_infos,
        "aggregate_csv": "aggregate.csv",
        "configs": configs,
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
