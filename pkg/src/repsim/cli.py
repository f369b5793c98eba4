"""Command-line entry point: single scenario runs, canned experiments and
sweeps, and the allocation oracle self-check.

Exit codes: 0 success, 1 validation/parse failure, 2 oracle failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .engine import ConfigError, ScenarioConfig, run
from .experiments import ExperimentSpec, run_experiment, write_series
from .oracle import oracle_check
from .scenario import ScenarioError, parse_scenario, resolved_dict

OUT_ENV = "REPSIM_OUT"


def _default_out() -> str:
    return os.environ.get(OUT_ENV, "out")


def _parse_seeds(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repsim",
        description="Reputation-weighted resource allocation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and write its CSVs")
    p_run.add_argument("--scenario", type=Path, default=None,
                       help="TOML scenario file (defaults apply when omitted)")
    p_run.add_argument("--seed", type=_parse_seeds, default=None,
                       help="seed override (first value is used)")
    p_run.add_argument("--out", type=Path, default=None,
                       help=f"output directory (default ${OUT_ENV} or ./out)")

    p_exp = sub.add_parser("experiment", help="run a canned experiment or sweep")
    p_exp.add_argument("--kind", required=True,
                       choices=["capacity-tiers", "free-riders", "strategies",
                                "interest-routing", "custom"])
    p_exp.add_argument("--seed", type=_parse_seeds, default=[0, 1, 2, 3, 4],
                       help="comma-separated seed list")
    p_exp.add_argument("--out", type=Path, default=None)
    p_exp.add_argument("--scenario", type=Path, default=None,
                       help="base scenario for custom experiments")
    p_exp.add_argument("--sweep", default="",
                       help="custom sweep, e.g. allocator.threshold=0.5,1,2")
    p_exp.add_argument("--jobs", type=int, default=1,
                       help="parallel (sweep value, seed) runs")

    p_oracle = sub.add_parser("oracle-check",
                              help="greedy allocation vs exhaustive optimum")
    p_oracle.add_argument("--trials", type=int, default=1000)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--max-requesters", type=int, default=4)
    p_oracle.add_argument("--max-demand", type=int, default=8)
    p_oracle.add_argument("--max-capacity", type=int, default=10)
    p_oracle.add_argument("--corrupt", action="store_true",
                          help=argparse.SUPPRESS)  # negative-control hook
    return parser


def _load_config(path: Path | None, seeds: list[int] | None) -> ScenarioConfig:
    config = parse_scenario(path) if path is not None else ScenarioConfig()
    if seeds:
        config.seed = seeds[0]
    return config


def _cmd_run(args) -> int:
    out_dir = Path(args.out) if args.out is not None else Path(_default_out())
    try:
        config = _load_config(args.scenario, args.seed)
        problems = config.validate()
        if problems:
            raise ConfigError("invalid scenario: " + "; ".join(problems))
        resolved = resolved_dict(config)
        print(json.dumps(resolved, indent=2, sort_keys=True))
        series = run(config)
    except (ScenarioError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    files = write_series(series, out_dir, f"run__s{config.seed}")
    with open(out_dir / f"run__s{config.seed}.json", "w") as fh:
        json.dump({"config": resolved, "files": files,
                   "aggregates": series.aggregates}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for name, fname in sorted(files.items()):
        print(f"wrote {name}: {out_dir / fname}")
    return 0


def _cmd_experiment(args) -> int:
    out_dir = Path(args.out) if args.out is not None else Path(_default_out())
    sweep_name, sweep_values = "", []
    if args.sweep:
        if "=" not in args.sweep:
            print("error: --sweep must look like path.to.field=v1,v2", file=sys.stderr)
            return 1
        sweep_name, _, raw = args.sweep.partition("=")
        sweep_values = [v for v in raw.split(",") if v != ""]
    try:
        scenario = parse_scenario(args.scenario) if args.scenario else None
        spec = ExperimentSpec(
            kind=args.kind,
            seeds=args.seed,
            out_dir=out_dir,
            sweep_name=sweep_name,
            sweep_values=sweep_values,
            scenario=scenario,
            jobs=args.jobs,
        )
        manifest = run_experiment(spec)
    except (ScenarioError, ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(manifest['runs'])} runs, aggregate and manifest under {out_dir}")
    return 0


def _cmd_oracle(args) -> int:
    report = oracle_check(
        trials=args.trials,
        seed=args.seed,
        max_requesters=args.max_requesters,
        max_demand=args.max_demand,
        max_capacity=args.max_capacity,
        corrupt=args.corrupt,
    )
    print(f"trials: {report.trials}")
    print(f"max objective gap: {report.max_gap:.3e}")
    print(f"feasibility violations: {report.feasibility_violations}")
    for line in report.failures[:10]:
        print(f"  {line}")
    if not report.ok:
        print("oracle check FAILED")
        return 2
    print("oracle check passed")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "experiment":
        return _cmd_experiment(args)
    return _cmd_oracle(args)


if __name__ == "__main__":
    sys.exit(main())
