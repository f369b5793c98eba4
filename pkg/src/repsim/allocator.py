"""A serving node's round: probabilistic requester selection, greedy
division of shared capacity, selection-gain control, and the batch-serving
trigger."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import NodeId

# Selection-gain controller constants: direction comes from the design
# (underused capacity -> admit more; unfulfilled selected demand -> admit
# fewer), magnitudes are ours.
GAIN_WINDOW = 10
UTIL_LOW = 0.9
FULFIL_OK = 0.9
GAIN_UP = 1.1
GAIN_DOWN = 0.9
GAIN_MIN = 0.1
GAIN_MAX = 10.0


@dataclass(frozen=True)
class AllocationRequest:
    requester: NodeId
    units: int  # demand in allocation units, >= 1
    arrival: int  # iteration the request arrived
    effective_rep: float  # effective reputation at arrival


@dataclass
class AllocatorState:
    """Serving-side state. pending is kept in canonical order: effective
    reputation descending, NodeId ascending on ties."""

    capacity_units: int
    gain: float = 1.0  # selection multiplier, > 0
    unit: float = 1.0  # size of one allocation unit in rate units
    threshold: float = 1.0  # serve when summed effective reputation reaches this
    timeout: int = 3  # ... or when the oldest request waited this long
    pending: list[AllocationRequest] = field(default_factory=list)
    util_window: float = 0.0
    fulfil_window: float = 1.0


def canonical_order(requests: list[AllocationRequest]) -> list[AllocationRequest]:
    return sorted(requests, key=lambda r: (-r.effective_rep, r.requester))


def selection_probability(effective_rep: float, exponent: float, gain: float) -> float:
    """min(1, effective_rep^exponent * gain)."""
    return min(1.0, effective_rep**exponent * gain)


def select_requesters(
    pending: list[AllocationRequest],
    exponent: float,
    gain: float,
    rng: np.random.Generator,
) -> list[AllocationRequest]:
    """Keep each request independently with its selection probability.

    Draws happen in canonical pending order, one uniform variate per
    request, so identical state and seed reproduce the same subset.
    """
    selected = []
    for req in canonical_order(pending):
        if rng.random() <= selection_probability(req.effective_rep, exponent, gain):
            selected.append(req)
    return selected


def allocate_capacity(
    selected: list[AllocationRequest],
    capacity_units: int,
    exponent: float,
) -> dict[NodeId, int]:
    """Split capacity among selected requesters, in whole units.

    Under-demand: everyone gets their full demand. Otherwise the grant
    maximizes sum_j (grant_j / demand_j)^exponent by taking the
    capacity_units largest marginal gains
        (k^x - (k-1)^x) * (1 / demand_j)^x
    which is exact because the objective is concave per requester. Ties go
    to the smaller demand, then the smaller NodeId.
    """
    if not selected or capacity_units <= 0:
        return {r.requester: 0 for r in selected}
    total = sum(r.units for r in selected)
    if total <= capacity_units:
        return {r.requester: r.units for r in selected}

    entries = []  # (-gain, demand, node, k)
    for req in selected:
        per_unit = (1.0 / req.units) ** exponent
        for k in range(1, min(req.units, capacity_units) + 1):
            gain = (k**exponent - (k - 1) ** exponent) * per_unit
            entries.append((-gain, req.units, req.requester, k))
    entries.sort()

    grants = {r.requester: 0 for r in selected}
    for _, _, node, _ in entries[:capacity_units]:
        grants[node] += 1
    return grants


def adjust_gain(
    state: AllocatorState,
    utilization: float,
    fulfillment: float,
    *,
    util_low: float = UTIL_LOW,
    fulfil_ok: float = FULFIL_OK,
    up: float = GAIN_UP,
    down: float = GAIN_DOWN,
    lo: float = GAIN_MIN,
    hi: float = GAIN_MAX,
) -> float:
    """Steer the selection gain: low utilization with healthy fulfillment
    raises it, unfulfilled selected demand lowers it, dead-band otherwise."""
    gain = state.gain
    if fulfillment < fulfil_ok:
        gain *= down
    elif utilization < util_low:
        gain *= up
    gain = min(hi, max(lo, gain))
    state.gain = gain
    state.util_window = utilization
    state.fulfil_window = fulfillment
    return gain


def serving_trigger(
    pending: list[AllocationRequest],
    threshold: float,
    oldest_wait: int,
    timeout: int,
) -> bool:
    """Serve when the running reputation sum over pending (best first)
    reaches the threshold, or when the oldest request has waited out."""
    if not pending:
        return False
    if oldest_wait >= timeout:
        return True
    running = 0.0
    for req in canonical_order(pending):
        running += req.effective_rep
        if running >= threshold:
            return True
    return False
