import json
from pathlib import Path

import pytest

from repsim.engine import DemandConfig, GroupSpec, ScenarioConfig
from repsim.experiments import (
    ExperimentSpec,
    aggregate_runs,
    derive_metrics,
    plan_runs,
    read_csv,
    run_experiment,
)


def small_scenario():
    return ScenarioConfig(
        iterations=30,
        acquaintance=5,
        seed=0,
        groups=[GroupSpec(count=10, label="plain", shared=10.0)],
        demand=DemandConfig(low=3, high=8),
    )


class TestPlanning:
    def test_free_riders_plan_is_sweep_times_seeds(self):
        spec = ExperimentSpec(kind="free-riders", seeds=[0, 1, 2, 3, 4],
                              out_dir=Path("unused"))
        jobs = plan_runs(spec)
        assert len(jobs) == 4 * 5  # pct in {5,10,20,30} x 5 seeds
        assert sorted({j.sweep for j in jobs}) == ["10", "20", "30", "5"]

    def test_capacity_tiers_one_network_per_seed(self):
        spec = ExperimentSpec(kind="capacity-tiers", seeds=[0, 1, 2],
                              out_dir=Path("unused"))
        jobs = plan_runs(spec)
        assert len(jobs) == 3
        labels = [g.label for g in jobs[0].config.groups]
        assert labels == ["low", "mid", "high"]

    def test_custom_sweep_applies_dotted_override(self):
        spec = ExperimentSpec(kind="custom", seeds=[1], out_dir=Path("unused"),
                              sweep_name="allocator.threshold",
                              sweep_values=[0.5, 2.0],
                              scenario=small_scenario())
        jobs = plan_runs(spec)
        assert [j.config.allocator.threshold for j in jobs] == [0.5, 2.0]
        # base scenario untouched
        assert small_scenario().allocator.threshold == 1.0

    def test_spec_validation(self):
        assert ExperimentSpec(kind="bogus", seeds=[1], out_dir=Path(".")).validate()
        assert ExperimentSpec(kind="custom", seeds=[], out_dir=Path(".")).validate()
        assert ExperimentSpec(kind="custom", seeds=[1], out_dir=Path(".")).validate()


@pytest.fixture(scope="module")
def custom_result(tmp_path_factory):
    out = tmp_path_factory.mktemp("exp")
    spec = ExperimentSpec(kind="custom", seeds=[0, 1], out_dir=out,
                          sweep_name="demand.high",
                          sweep_values=[6, 12],
                          scenario=small_scenario())
    manifest = run_experiment(spec)
    return out, manifest


class TestRunExperiment:
    def test_one_csv_per_sweep_value_and_seed(self, custom_result):
        out, manifest = custom_result
        run_files = sorted(p.name for p in (out / "runs").glob("custom__*.csv"))
        assert len(run_files) == 4  # 2 sweep values x 2 seeds
        assert (out / "aggregate.csv").exists()
        assert (out / "manifest.json").exists()

    def test_manifest_records_resolved_configs_and_seeds(self, custom_result):
        out, manifest = custom_result
        on_disk = json.loads((out / "manifest.json").read_text())
        assert on_disk["seeds"] == [0, 1]
        assert on_disk["kind"] == "custom"
        assert set(on_disk["configs"]) == {"6", "12"}
        assert on_disk["configs"]["12"]["demand"]["high"] == 12
        assert on_disk["sweep"]["name"] == "demand.high"

    def test_aggregate_rows_are_exact_means_of_run_metrics(self, custom_result):
        out, manifest = custom_result
        runs_dir = out / "runs"
        per_run = {}
        for info in manifest["runs"]:
            for key, value in derive_metrics(info, runs_dir).items():
                per_run.setdefault(key, []).append(value)
        agg = {(r["sweep"], r["metric"]): r for r in read_csv(out / "aggregate.csv")}
        assert set(agg) == set(per_run)
        for key, values in per_run.items():
            mean = sum(values) / len(values)
            assert agg[key]["mean"] == f"{mean:.6f}"
            assert agg[key]["n"] == str(len(values))

    def test_parallel_jobs_identical_output(self, custom_result, tmp_path):
        out_serial, _ = custom_result
        spec = ExperimentSpec(kind="custom", seeds=[0, 1], out_dir=tmp_path,
                              sweep_name="demand.high",
                              sweep_values=[6, 12],
                              scenario=small_scenario(), jobs=2)
        run_experiment(spec)
        for path in sorted((out_serial / "runs").glob("*.csv")):
            twin = tmp_path / "runs" / path.name
            assert twin.read_bytes() == path.read_bytes(), path.name
        assert ((tmp_path / "aggregate.csv").read_bytes()
                == (out_serial / "aggregate.csv").read_bytes())


class TestAggregation:
    def test_stddev_uses_sample_convention(self, tmp_path):
        spec = ExperimentSpec(kind="custom", seeds=[0, 1, 2], out_dir=tmp_path,
                              scenario=small_scenario())
        manifest = run_experiment(spec)
        rows = read_csv(tmp_path / "aggregate.csv")
        base = [r for r in rows if r[
            "metric"] == "received_mean" and r["sweep"] == "base"]
        assert len(base) == 1
        per_run = [
            derive_metrics(info, tmp_path / "runs")[("base", "received_mean")]
            for info in manifest["runs"]
        ]
        mean = sum(per_run) / len(per_run)
        var = sum((v - mean) ** 2 for v in per_run) / (len(per_run) - 1)
        assert float(base[0]["std"]) == pytest.approx(var ** 0.5, abs=1e-6)
