"""Shared vocabulary: node identities, per-transaction rate observations,
and the global constants every other module reads."""

from __future__ import annotations

from dataclasses import dataclass

NodeId = int


class InvariantViolation(ValueError):
    """A domain invariant failed; the message names the violated field."""


@dataclass(frozen=True)
class RateObservation:
    """The five rate quantities of one transaction between a node pair.

    All rates are in units/iteration. `requested` is what the requester
    asked for, `willing` what the server agreed to provide, `delivered`
    what actually arrived, `feasible` what the requester's side could have
    carried, and `accepted` what the requester agreed to take.
    """

    requester: NodeId
    server: NodeId
    requested: float
    willing: float
    delivered: float
    feasible: float
    accepted: float
    iteration: int


@dataclass(frozen=True)
class GlobalParams:
    """Network-wide constants.

    exponent: reputation exponent in (0, 1]; a low-reputation node can only
        climb back when this is < 1.
    universal_capacity: scaling capacity shared by all nodes; must be at
        least the largest download capacity in the scenario so scaled
        reputation stays in [0, 1].
    eta: behavior exponent in [0, 1); the delivery factor is raised to
        (1 - eta).
    smoothing: exponential smoothing weight in (0, 1] for aggregating
        per-transaction scores over time.
    """

    exponent: float = 0.75
    universal_capacity: float = 100.0
    eta: float = 0.5
    smoothing: float = 0.3

    def __post_init__(self):
        if not 0.0 < self.exponent <= 1.0:
            raise InvariantViolation(f"exponent must be in (0,1], got {self.exponent}")
        if self.universal_capacity <= 0.0:
            raise InvariantViolation("universal_capacity must be positive")
        if not 0.0 <= self.eta < 1.0:
            raise InvariantViolation(f"eta must be in [0,1), got {self.eta}")
        if not 0.0 < self.smoothing <= 1.0:
            raise InvariantViolation(f"smoothing must be in (0,1], got {self.smoothing}")


@dataclass(frozen=True)
class NodeParams:
    """Per-node constants: download capacity and behavior strategy."""

    node: NodeId
    download_capacity: float
    eta: float = 0.5
    strategy: str = "honest"  # honest | free-rider | over-requester
    multiplier: float = 1.0  # over-requester demand inflation, >= 1

    def __post_init__(self):
        if self.download_capacity <= 0.0:
            raise InvariantViolation("download_capacity must be positive")
        if self.multiplier < 1.0:
            raise InvariantViolation("multiplier must be >= 1")


def validate_observation(obs: RateObservation, params: NodeParams) -> RateObservation:
    """Gate every observation before it reaches the reputation layer.

    Checks all RateObservation invariants against the requester's download
    capacity and returns the observation unchanged, or raises
    InvariantViolation naming the offending field.
    """
    for name in ("requested", "willing", "delivered", "feasible", "accepted"):
        if getattr(obs, name) < 0.0:
            raise InvariantViolation(f"{name} is negative")
    if obs.requested <= 0.0:
        raise InvariantViolation("requested must be positive for a recorded observation")
    if obs.willing > obs.requested:
        raise InvariantViolation("willing exceeds requested")
    if obs.delivered > min(obs.accepted, obs.feasible):
        raise InvariantViolation("delivered exceeds min(accepted, feasible)")
    if obs.requested > params.download_capacity:
        raise InvariantViolation("request exceeds download capacity")
    return obs
