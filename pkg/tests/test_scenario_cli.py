import json
import subprocess
import sys

import pytest

from repsim.cli import main
from repsim.scenario import ScenarioError, parse_scenario, resolved_dict


FULL_SCENARIO = """
iterations = 40
acquaintance = 5
seed = 9
exponent = 0.75
eta = 0.5

[demand]
low = 3
high = 9

[allocator]
threshold = 0.5
timeout = 2

[routing]
rank_refresh = 4

[[groups]]
count = 12
label = "plain"
shared = 10.0

[[groups]]
count = 4
label = "greedy"
strategy = "over-requester"
multiplier = 2.0
shared = 10.0
"""


class TestParseScenario:
    def test_empty_file_yields_defaults(self, tmp_path):
        path = tmp_path / "empty.toml"
        path.write_text("")
        cfg = parse_scenario(path)
        assert cfg.iterations == 100
        assert cfg.n_nodes == 16
        assert cfg.validate() == []
        resolved = resolved_dict(cfg)
        assert resolved["universal_capacity"] == 100.0
        assert resolved["n_nodes"] == 16

    def test_full_scenario_round_trip(self, tmp_path):
        path = tmp_path / "s.toml"
        path.write_text(FULL_SCENARIO)
        cfg = parse_scenario(path)
        assert cfg.iterations == 40
        assert cfg.demand.low == 3
        assert cfg.allocator.threshold == 0.5
        assert cfg.routing.rank_refresh == 4
        assert [g.label for g in cfg.groups] == ["plain", "greedy"]
        assert cfg.groups[1].multiplier == 2.0

    def test_free_rider_percentage_arithmetic(self, tmp_path):
        path = tmp_path / "fr.toml"
        path.write_text(
            "[[groups]]\ncount = 180\nshared = 10.0\n"
            "[[groups]]\ncount = 20\nstrategy = \"free-rider\"\nshared = 0.0\n"
        )
        cfg = parse_scenario(path)
        free = sum(g.count for g in cfg.groups if g.strategy == "free-rider")
        assert cfg.n_nodes == 200
        assert free == 20

    def test_malformed_numeric_names_field(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("[demand]\nlow = \"many\"\n")
        with pytest.raises(ScenarioError, match="demand.low"):
            parse_scenario(path)

    def test_toml_syntax_error_reports_position(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("iterations = = 5\n")
        with pytest.raises(ScenarioError, match="parse error"):
            parse_scenario(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "unknown.toml"
        path.write_text("mystery = 3\n")
        with pytest.raises(ScenarioError, match="mystery"):
            parse_scenario(path)


def tiny_scenario(tmp_path):
    path = tmp_path / "tiny.toml"
    path.write_text(
        "iterations = 20\nacquaintance = 4\nseed = 2\n"
        "[[groups]]\ncount = 8\nshared = 10.0\n"
    )
    return path


class TestCliRun:
    def test_run_writes_csv_and_echoes_config(self, tmp_path, capsys):
        scenario = tiny_scenario(tmp_path)
        out = tmp_path / "out"
        code = main(["run", "--scenario", str(scenario), "--out", str(out)])
        assert code == 0
        captured = capsys.readouterr().out
        echoed = json.loads(captured[: captured.index('wrote')])
        assert echoed["iterations"] == 20
        run_csv = out / "run__s2.csv"
        assert run_csv.exists()
        header = run_csv.read_text().splitlines()[0]
        assert header == "iteration,node,requested,received,served,queries"

    def test_run_byte_identical_within_process(self, tmp_path):
        scenario = tiny_scenario(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--scenario", str(scenario), "--out", str(out_a)]) == 0
        assert main(["run", "--scenario", str(scenario), "--out", str(out_b)]) == 0
        assert (out_a / "run__s2.csv").read_bytes() == (out_b / "run__s2.csv").read_bytes()

    def test_run_byte_identical_across_processes(self, tmp_path):
        scenario = tiny_scenario(tmp_path)
        outs = []
        for name in ("p1", "p2"):
            out = tmp_path / name
            proc = subprocess.run(
                [sys.executable, "-m", "repsim.cli", "run", "--scenario",
                 str(scenario), "--out", str(out)],
                capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            outs.append((out / "run__s2.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_validation_failure_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text("iterations = 5\nacquaintance = 9\n")
        assert main(["run", "--scenario", str(bad), "--out", str(tmp_path / "o")]) == 1
        assert "error" in capsys.readouterr().err

    def test_parse_failure_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text("[demand]\nlow = \"x\"\n")
        assert main(["run", "--scenario", str(bad), "--out", str(tmp_path / "o")]) == 1

    def test_out_env_var_supplies_default(self, tmp_path, monkeypatch, capsys):
        scenario = tiny_scenario(tmp_path)
        out = tmp_path / "env_out"
        monkeypatch.setenv("REPSIM_OUT", str(out))
        assert main(["run", "--scenario", str(scenario)]) == 0
        assert (out / "run__s2.csv").exists()


class TestCliOracle:
    def test_oracle_check_passes(self, capsys):
        assert main(["oracle-check", "--trials", "200", "--seed", "3"]) == 0
        assert "passed" in capsys.readouterr().out

    def test_zero_trials_success(self, capsys):
        assert main(["oracle-check", "--trials", "0"]) == 0

    def test_corrupted_greedy_exits_two(self, capsys):
        assert main(["oracle-check", "--trials", "200", "--corrupt"]) == 2
        assert "FAILED" in capsys.readouterr().out
