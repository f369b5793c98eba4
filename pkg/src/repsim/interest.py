"""Interest-based server selection: interaction-derived similarity, the
combined similarity/reputation score, neighbor ranking, and the slow
adaptation of the log base and mixing coefficient."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import NodeId
from .reputation import ReputationTable

BASE_MIN = 2.0
BASE_FACTOR = 2.0
ANSWER_OK = 0.5
ANSWER_HIGH = 0.9
ALPHA_HIGH = 0.8
ALPHA_LOW = 0.2
ALPHA_DECAY = 0.95
WARMUP = 50
CHURN_THRESHOLD = 0.5


@dataclass
class InteractionStats:
    """Query bookkeeping per peer: total queries either direction, and how
    many were answered. 0 <= answered <= total."""

    owner: NodeId
    total: dict[NodeId, int] = field(default_factory=dict)
    answered: dict[NodeId, int] = field(default_factory=dict)

    def record(self, peer: NodeId, answered: bool):
        self.total[peer] = self.total.get(peer, 0) + 1
        if answered:
            self.answered[peer] = self.answered.get(peer, 0) + 1


@dataclass
class InterestConfig:
    base: float = 10.0  # log base, > 1
    alpha: float = ALPHA_HIGH  # similarity weight in the combined score, [0,1]
    neighbor_count: int = 10


def similarity(total: int, answered: int, base: float) -> float:
    """Answered-ratio, discounted while the interaction count is still
    below the log base: v*log_base(total+1) when total < base, else v."""
    if total == 0:
        return 0.0
    v = answered / total
    if total < base:
        return v * math.log(total + 1) / math.log(base)
    return v


def combined_score(sim: float, rep: float, alpha: float) -> float:
    """Convex combination alpha*similarity + (1-alpha)*reputation."""
    return alpha * sim + (1.0 - alpha) * rep


def rank_servers(
    stats: InteractionStats,
    reputations: ReputationTable,
    config: InterestConfig,
    candidates: list[NodeId],
    newcomer_default: float = 0.0,
) -> list[NodeId]:
    """Top neighbor_count candidates by combined score, score descending,
    NodeId ascending on ties."""
    scored = []
    entries = reputations.entries
    for peer in candidates:
        entry = entries.get(peer)
        rep = newcomer_default if entry is None else entry.score
        sim = similarity(stats.total.get(peer, 0), stats.answered.get(peer, 0), config.base)
        scored.append((-combined_score(sim, rep, config.alpha), peer))
    scored.sort()
    return [peer for _, peer in scored[: config.neighbor_count]]


def adapt_base(
    config: InterestConfig,
    answer_rate: float,
    *,
    factor: float = BASE_FACTOR,
    rate_ok: float = ANSWER_OK,
    rate_high: float = ANSWER_HIGH,
    base_min: float = BASE_MIN,
) -> float:
    """Widen the similarity discount when ranked neighbors answer too few
    queries, tighten it when nearly everything is answered."""
    if answer_rate < rate_ok:
        config.base = config.base * factor
    elif answer_rate > rate_high:
        config.base = max(config.base / factor, base_min)
    return config.base


def adapt_alpha(
    config: InterestConfig,
    network_age: int,
    churn: float,
    *,
    alpha_high: float = ALPHA_HIGH,
    alpha_low: float = ALPHA_LOW,
    decay: float = ALPHA_DECAY,
    warmup: int = WARMUP,
    churn_threshold: float = CHURN_THRESHOLD,
) -> float:
    """Newcomers and unstable neighborhoods lean on similarity (high
    alpha); once the ranked set settles, alpha decays geometrically toward
    alpha_low so reputation dominates."""
    if network_age < warmup or churn >= churn_threshold:
        config.alpha = alpha_high
    else:
        config.alpha = alpha_low + (config.alpha - alpha_low) * decay
    return config.alpha
