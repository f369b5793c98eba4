"""repsim: deterministic simulator of reputation-weighted resource
allocation in peer-to-peer networks."""

__version__ = "0.1.0"

from .core import GlobalParams, NodeParams, RateObservation, validate_observation
from .engine import MetricsSeries, ScenarioConfig, build_network, run, step

__all__ = [
    "GlobalParams",
    "NodeParams",
    "RateObservation",
    "validate_observation",
    "MetricsSeries",
    "ScenarioConfig",
    "build_network",
    "run",
    "step",
    "__version__",
]
