"""Per-peer reputation: single-transaction scores, smoothed aggregation,
and request-size-adjusted effective reputation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import NodeId, RateObservation


class DegenerateTransaction(ZeroDivisionError):
    """Transaction carries no reputation signal; skip it, do not record it."""


@dataclass
class ReputationEntry:
    score: float
    last_update: int
    n_obs: int


@dataclass
class ReputationTable:
    """One node's view of its peers. Single-writer: only the owner mutates it."""

    owner: NodeId
    entries: dict[NodeId, ReputationEntry] = field(default_factory=dict)


def reputation_sample(
    obs: RateObservation,
    eta: float,
    download_capacity: float,
    universal_capacity: float,
) -> float:
    """Score one validated transaction, already scaled to [0, 1].

    score = (delivered / min(accepted, feasible))^(1-eta)
            * (willing / requested)
            * (requested / download_capacity)
            * (download_capacity / universal_capacity)

    The last two factors cancel to requested/universal_capacity; both
    orders agree to floating tolerance. Raises DegenerateTransaction when
    min(accepted, feasible) or requested is zero (nothing could have been
    delivered through the requester's side).
    """
    cap = min(obs.accepted, obs.feasible)
    if cap == 0.0 or obs.requested == 0.0:
        raise DegenerateTransaction(
            f"no signal: min(accepted, feasible)={cap}, requested={obs.requested}"
        )
    delivery = (obs.delivered / cap) ** (1.0 - eta)
    willingness = obs.willing / obs.requested
    weight = (obs.requested / download_capacity) * (download_capacity / universal_capacity)
    return delivery * willingness * weight


def record_transaction(
    table: ReputationTable,
    peer: NodeId,
    sample: float,
    iteration: int,
    smoothing: float,
) -> ReputationTable:
    """Fold one sample into the table: new peers start at the sample value,
    known peers move by score <- (1-smoothing)*score + smoothing*sample."""
    entry = table.entries.get(peer)
    if entry is None:
        table.entries[peer] = ReputationEntry(score=sample, last_update=iteration, n_obs=1)
    else:
        entry.score = (1.0 - smoothing) * entry.score + smoothing * sample
        entry.last_update = iteration
        entry.n_obs += 1
    return table


def effective_reputation(
    table: ReputationTable,
    peer: NodeId,
    requested: float,
    owner_capacity: float,
    newcomer_default: float,
) -> float:
    """Stored score rescaled by (owner download capacity / current request).

    Smaller requests earn proportionally higher values; the result may
    exceed 1 (the allocator clamps the probability, not this value).
    Unknown peers fall back to newcomer_default.
    """
    if requested <= 0.0:
        raise ZeroDivisionError("requested amount must be positive")
    entry = table.entries.get(peer)
    score = newcomer_default if entry is None else entry.score
    return score * (owner_capacity / requested)


def dump_rows(table: ReputationTable) -> list[tuple[NodeId, NodeId, float, int]]:
    """(owner, peer, score, n_obs) rows for the metrics sink, peer ascending."""
    return [
        (table.owner, peer, e.score, e.n_obs)
        for peer, e in sorted(table.entries.items())
    ]
