"""Shared-capacity self-tuning: perturb by one step each review period and
steer toward the smallest capacity that still delivers the achievable
average download."""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_PERIOD = 10  # iterations between reviews
DEFAULT_STEP_FRAC = 0.05  # step as a fraction of download capacity
EPSILON_MIN = 1.0
EPSILON_COEFF = 1.0


@dataclass
class CapacityState:
    """Controller memory: only the last two periods are ever read.

    action / prev_action are in {-1, 0, +1}; shared stays >= 0.
    """

    shared: float
    step: float
    epsilon: float
    period: int = DEFAULT_PERIOD
    action: int = -1
    prev_action: int = -1
    prev_download: float | None = None


def initial_capacity(perceived_demand: float | None, download_capacity: float) -> float:
    """Start from the perceived download requirement; without an estimate,
    share half the download capacity."""
    if perceived_demand is not None:
        return perceived_demand
    return download_capacity / 2.0


def review(state: CapacityState, download: float) -> CapacityState:
    """One review with the fresh period-average download.

    Decides the next action from how the last action moved the average
    download, applies it to the shared capacity, and shifts history:
      flat and repeating (or idle)       -> probe down
      flat after an up-probe that undid
        a down-probe                     -> hold (back at the optimum)
      significant rise                   -> keep increasing
      significant drop after a decrease  -> undo the cut
      anything else                      -> hold and observe
    """
    prev = download if state.prev_download is None else state.prev_download
    a, p = state.action, state.prev_action
    if abs(download - prev) <= state.epsilon:
        if a == p or a == 0:
            nxt = -1
        else:
            nxt = 0
    else:
        if download > prev:
            nxt = 1
        elif a == -1:
            nxt = 1
        else:
            nxt = 0
    state.prev_action = a
    state.action = nxt
    state.shared = max(0.0, state.shared + state.step * nxt)
    state.prev_download = download
    return state


def tune_epsilon(
    demand_variance: float,
    coeff: float = EPSILON_COEFF,
    floor: float = EPSILON_MIN,
) -> float:
    """Higher observed demand variation widens the significance band."""
    if demand_variance < 0.0:
        raise ValueError("variance must be non-negative")
    return max(floor, coeff * demand_variance**0.5)
