"""Deterministic discrete-time orchestration: content model, request
generation per node strategy, serving through the allocator, reputation
and interaction updates, periodic controllers, and metrics capture."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import allocator as alloc_mod
from . import capacity as cap_mod
from . import interest as int_mod
from .allocator import AllocationRequest, AllocatorState
from .capacity import CapacityState
from .core import NodeId, NodeParams, RateObservation, validate_observation
from .interest import InteractionStats, InterestConfig
from .reputation import (
    DegenerateTransaction,
    ReputationTable,
    dump_rows,
    effective_reputation,
    record_transaction,
    reputation_sample,
)

FREE_RIDER = "free-rider"
OVER_REQUESTER = "over-requester"
HONEST = "honest"


# ---------------------------------------------------------------------------
# scenario configuration


@dataclass
class GroupSpec:
    count: int
    label: str = ""
    download_capacity: float = 100.0
    shared: float = 10.0  # units/iteration offered to the network
    policy: str = "fixed"  # fixed | controller
    strategy: str = HONEST
    multiplier: float = 1.0  # over-requester inflation, > 1 for that strategy


@dataclass
class DemandConfig:
    low: int = 5
    high: int = 15  # inclusive bounds on per-request need, in units


@dataclass
class ContentConfig:
    catalog: int = 0  # total files; 0 disables the catalog (any peer serves anyone)
    categories: int = 1
    interests: int = 1  # interest categories per node
    holdings: int = 0  # files held per node, drawn from its interest categories


@dataclass
class AllocatorConfig:
    unit: float = 1.0
    threshold: float = 1.0
    timeout: int = 3
    gain: float = 1.0
    window: int = 10


@dataclass
class ControllerConfig:
    period: int = 10
    step_frac: float = 0.05  # review step as a fraction of download capacity
    epsilon_min: float = 1.0
    epsilon_coeff: float = 1.0


@dataclass
class InterestParams:
    base: float = 10.0
    base_min: float = 2.0
    base_factor: float = 2.0
    answer_ok: float = 0.5
    answer_high: float = 0.9
    alpha_high: float = 0.8
    alpha_low: float = 0.2
    alpha_decay: float = 0.95
    warmup: int = 50
    churn_threshold: float = 0.5
    neighbor_count: int = 10


@dataclass
class RoutingConfig:
    rank_refresh: int = 5  # iterations between ranked-list refreshes
    ttl: int = 64  # probe cap per query trial
    trial_nodes: int = 0  # queriers sampled per measured iteration
    measure_from: int = 0  # first iteration that runs query trials


@dataclass
class MetricsConfig:
    alloc_interval: int = 0  # 0 disables a sink
    reputation_interval: int = 0
    neighbor_interval: int = 0


@dataclass
class ScenarioConfig:
    iterations: int = 100
    acquaintance: int = 10
    seed: int = 0
    groups: list[GroupSpec] = field(default_factory=lambda: [GroupSpec(count=16)])
    demand: DemandConfig = field(default_factory=DemandConfig)
    content: ContentConfig = field(default_factory=ContentConfig)
    exponent: float = 0.75
    universal_capacity: Optional[float] = None  # default: max download capacity
    eta: float = 0.5
    smoothing: float = 0.3
    newcomer_score: Optional[float] = None  # default: 0.5 * mean demand / universal
    allocator: AllocatorConfig = field(default_factory=AllocatorConfig)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    interest: InterestParams = field(default_factory=InterestParams)
    routing: RoutingConfig = field(default_factory=RoutingConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)

    @property
    def n_nodes(self) -> int:
        return sum(g.count for g in self.groups)

    def resolved_universal_capacity(self) -> float:
        if self.universal_capacity is not None:
            return self.universal_capacity
        return max(g.download_capacity for g in self.groups)

    def resolved_newcomer_score(self) -> float:
        if self.newcomer_score is not None:
            return self.newcomer_score
        mean_demand = (self.demand.low + self.demand.high) / 2.0 * self.allocator.unit
        return 0.5 * mean_demand / self.resolved_universal_capacity()

    def validate(self) -> list[str]:
        problems = []
        if not self.groups:
            problems.append("at least one node group is required")
            return problems
        if self.n_nodes < 2:
            problems.append(f"need at least 2 nodes, got {self.n_nodes}")
        if self.iterations < 0:
            problems.append("iterations must be >= 0")
        if self.iterations and not self.acquaintance < self.iterations:
            problems.append("acquaintance must be smaller than iterations")
        if self.acquaintance < 0:
            problems.append("acquaintance must be >= 0")
        for i, g in enumerate(self.groups):
            tag = g.label or f"group {i}"
            if g.count < 1:
                problems.append(f"{tag}: count must be >= 1")
            if g.download_capacity <= 0:
                problems.append(f"{tag}: download_capacity must be positive")
            if g.shared < 0:
                problems.append(f"{tag}: shared capacity must be >= 0")
            if g.policy not in ("fixed", "controller"):
                problems.append(f"{tag}: unknown policy {g.policy!r}")
            if g.strategy not in (HONEST, FREE_RIDER, OVER_REQUESTER):
                problems.append(f"{tag}: unknown strategy {g.strategy!r}")
            if g.strategy == OVER_REQUESTER and not g.multiplier > 1.0:
                problems.append(f"{tag}: over-requester multiplier must be > 1")
            if g.strategy != OVER_REQUESTER and g.multiplier != 1.0:
                problems.append(f"{tag}: multiplier is only meaningful for over-requesters")
            if g.strategy == FREE_RIDER and g.shared != 0.0:
                problems.append(f"{tag}: free riders share nothing; set shared = 0")
        if not 1 <= self.demand.low <= self.demand.high:
            problems.append("demand bounds must satisfy 1 <= low <= high")
        if not 0.0 < self.exponent <= 1.0:
            problems.append("exponent must be in (0, 1]")
        if not 0.0 <= self.eta < 1.0:
            problems.append("eta must be in [0, 1)")
        if not 0.0 < self.smoothing <= 1.0:
            problems.append("smoothing must be in (0, 1]")
        if self.universal_capacity is not None:
            top = max(g.download_capacity for g in self.groups)
            if self.universal_capacity < top:
                problems.append("universal_capacity must cover the largest download capacity")
        if self.content.catalog > 0:
            if self.content.categories < 1:
                problems.append("catalog requires categories >= 1")
            elif not 1 <= self.content.interests <= self.content.categories:
                problems.append("interests must be in [1, categories]")
            if self.content.holdings < 1:
                problems.append("catalog requires holdings >= 1")
        if self.allocator.unit <= 0:
            problems.append("allocator unit must be positive")
        if self.allocator.window < 1:
            problems.append("allocator window must be >= 1")
        if self.allocator.timeout < 1:
            problems.append("allocator timeout must be >= 1")
        if self.controller.period < 1:
            problems.append("controller period must be >= 1")
        if self.routing.rank_refresh < 1:
            problems.append("rank_refresh must be >= 1")
        if self.routing.ttl < 1:
            problems.append("ttl must be >= 1")
        if self.interest.base <= 1.0:
            problems.append("interest base must be > 1")
        if self.interest.neighbor_count < 1:
            problems.append("neighbor_count must be >= 1")
        return problems


class ConfigError(ValueError):
    """Scenario configuration violates its invariants; message lists them."""


@dataclass
class MetricsSeries:
    """Everything a run measured.

    node_rows: (iteration, node, requested, received, served, queries);
    received never exceeds requested within a row.
    query_rows: (iteration, node, mode, trials, probes).
    capacity_rows: (node, review, shared, action, download).
    alloc_rows: (iteration, node, pending, selected, granted, utilization, gain).
    """

    node_rows: list[tuple] = field(default_factory=list)
    query_rows: list[tuple] = field(default_factory=list)
    capacity_rows: list[tuple] = field(default_factory=list)
    alloc_rows: list[tuple] = field(default_factory=list)
    reputation_rows: list[tuple] = field(default_factory=list)
    neighbor_rows: list[tuple] = field(default_factory=list)
    aggregates: dict[str, float] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# runtime state


class _Node:
    __slots__ = (
        "id", "params", "label", "policy", "rng", "table", "stats", "icfg",
        "alloc", "cap", "shared_units", "interests", "holdings", "wanted",
        "ranked", "ranked_prev", "outstanding", "incoming",
        "util_sum", "ful_num", "ful_den", "resolved_win", "answered_win",
        "recv_period", "recent_downloads", "review_count",
    )

    def __init__(self, node_id: NodeId, spec: GroupSpec, cfg: ScenarioConfig,
                 rng: np.random.Generator):
        self.id = node_id
        self.params = NodeParams(
            node=node_id,
            download_capacity=spec.download_capacity,
            eta=cfg.eta,
            strategy=spec.strategy,
            multiplier=spec.multiplier if spec.strategy == OVER_REQUESTER else 1.0,
        )
        self.label = spec.label
        self.policy = spec.policy
        self.rng = rng
        self.table = ReputationTable(owner=node_id)
        self.stats = InteractionStats(owner=node_id)
        self.icfg = InterestConfig(
            base=cfg.interest.base,
            alpha=cfg.interest.alpha_high,
            neighbor_count=cfg.interest.neighbor_count,
        )
        unit = cfg.allocator.unit
        self.alloc = AllocatorState(
            capacity_units=int(spec.shared / unit),
            gain=cfg.allocator.gain,
            unit=unit,
            threshold=cfg.allocator.threshold,
            timeout=cfg.allocator.timeout,
        )
        if spec.policy == "controller":
            shared0 = cap_mod.initial_capacity(
                spec.shared if spec.shared > 0 else None, spec.download_capacity)
            self.cap = CapacityState(
                shared=shared0,
                step=cfg.controller.step_frac * spec.download_capacity,
                epsilon=cfg.controller.epsilon_min,
                period=cfg.controller.period,
            )
            self.shared_units = int(shared0 / unit)
        else:
            self.cap = None
            self.shared_units = int(spec.shared / unit)
        self.interests: tuple[int, ...] = ()
        self.holdings: frozenset[int] = frozenset()
        self.wanted: list[int] = []
        self.ranked: list[NodeId] = []
        self.ranked_prev: frozenset[NodeId] = frozenset()
        self.outstanding = False
        self.incoming: list[tuple[NodeId, int, int]] = []
        self.util_sum = 0.0
        self.ful_num = 0
        self.ful_den = 0
        self.resolved_win = 0
        self.answered_win = 0
        self.recv_period = 0
        self.recent_downloads: deque[float] = deque(maxlen=5)
        self.review_count = 0


@dataclass
class SimState:
    config: ScenarioConfig
    nodes: list[_Node]
    universal: float
    newcomer: float
    holders: list[list[NodeId]]  # file -> holders; empty when no catalog
    all_ids: list[NodeId]
    trial_rng: np.random.Generator
    capacity_rows: list[tuple] = field(default_factory=list)
    alloc_rows: list[tuple] = field(default_factory=list)
    iteration: int = 0


def _node_rng(seed: int, node_id: NodeId) -> np.random.Generator:
    # hashed sub-seeding: independent of node count and processing order
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 1, node_id])))


def build_network(config: ScenarioConfig) -> SimState:
    """Instantiate nodes, per-node random streams, and the file catalog."""
    problems = config.validate()
    if problems:
        raise ConfigError("invalid scenario: " + "; ".join(problems))

    nodes: list[_Node] = []
    nid = 0
    for spec in config.groups:
        for _ in range(spec.count):
            nodes.append(_Node(nid, spec, config, _node_rng(config.seed, nid)))
            nid += 1

    content = config.content
    holders: list[list[NodeId]] = []
    if content.catalog > 0:
        by_cat: list[list[int]] = [[] for _ in range(content.categories)]
        for f in range(content.catalog):
            by_cat[f % content.categories].append(f)
        holders = [[] for _ in range(content.catalog)]
        for node in nodes:
            cats = node.rng.choice(content.categories, size=content.interests,
                                   replace=False)
            node.interests = tuple(sorted(int(c) for c in cats))
            pool = [f for c in node.interests for f in by_cat[c]]
            take = min(content.holdings, len(pool))
            picks = node.rng.choice(len(pool), size=take, replace=False)
            node.holdings = frozenset(pool[i] for i in sorted(int(i) for i in picks))
            for f in sorted(node.holdings):
                holders[f].append(node.id)
        for node in nodes:
            node.wanted = [
                f
                for c in node.interests
                for f in by_cat[c]
                if f not in node.holdings and holders[f]
            ]

    return SimState(
        config=config,
        nodes=nodes,
        universal=config.resolved_universal_capacity(),
        newcomer=config.resolved_newcomer_score(),
        holders=holders,
        all_ids=[n.id for n in nodes],
        trial_rng=np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([config.seed, 2]))),
    )


# ---------------------------------------------------------------------------
# one iteration


def _uniform_other(node: _Node, n: int) -> NodeId:
    j = int(node.rng.integers(n - 1))
    return j if j < node.id else j + 1


def _choose_server(state: SimState, node: _Node, file_id: Optional[int],
                   iteration: int) -> Optional[NodeId]:
    if state.holders:
        candidates = [h for h in state.holders[file_id] if h != node.id]
        if not candidates:
            return None
        if iteration < state.config.acquaintance:
            return candidates[int(node.rng.integers(len(candidates)))]
        ranked = int_mod.rank_servers(node.stats, node.table, node.icfg,
                                      candidates, state.newcomer)
        return ranked[int(node.rng.integers(len(ranked)))]
    n = len(state.nodes)
    if iteration < state.config.acquaintance or not node.ranked:
        return _uniform_other(node, n)
    return node.ranked[int(node.rng.integers(len(node.ranked)))]


def _refresh_rankings(state: SimState):
    for node in state.nodes:
        cands = [i for i in state.all_ids if i != node.id]
        node.ranked = int_mod.rank_servers(node.stats, node.table, node.icfg,
                                           cands, state.newcomer)


class _StepAcc:
    __slots__ = ("requested", "received", "served", "queries",
                 "pending_n", "selected_n", "granted_n")

    def __init__(self, n: int):
        self.requested = [0] * n
        self.received = [0] * n
        self.served = [0] * n
        self.queries = [0] * n
        self.pending_n = [0] * n
        self.selected_n = [0] * n
        self.granted_n = [0] * n


def _resolve(state: SimState, requester: _Node, server: _Node, units: int,
             grant: int, iteration: int, acc: _StepAcc):
    unit = state.config.allocator.unit
    rate_req = units * unit
    rate_got = grant * unit
    obs = RateObservation(
        requester=requester.id,
        server=server.id,
        requested=rate_req,
        willing=rate_got,
        delivered=rate_got,
        feasible=rate_req,
        accepted=rate_got if grant > 0 else rate_req,
        iteration=iteration,
    )
    validate_observation(obs, requester.params)
    try:
        sample = reputation_sample(obs, requester.params.eta,
                                   requester.params.download_capacity,
                                   state.universal)
    except DegenerateTransaction:
        pass
    else:
        record_transaction(requester.table, server.id, sample, iteration,
                           state.config.smoothing)
    answered = grant > 0
    requester.stats.record(server.id, answered)
    server.stats.record(requester.id, answered)
    requester.resolved_win += 1
    requester.answered_win += int(answered)
    requester.recv_period += grant
    requester.outstanding = False
    acc.requested[requester.id] += units
    acc.received[requester.id] += grant
    acc.served[server.id] += grant


def step(state: SimState, iteration: int) -> list[tuple]:
    """Advance the network by one iteration; returns the node metric rows."""
    cfg = state.config
    nodes = state.nodes
    acc = _StepAcc(len(nodes))
    acq = iteration < cfg.acquaintance

    if not state.holders and not acq:
        if (iteration - cfg.acquaintance) % cfg.routing.rank_refresh == 0:
            _refresh_rankings(state)

    # phase 1: every idle node issues one request sized by its strategy
    for node in nodes:
        if node.outstanding:
            continue
        need = int(node.rng.integers(cfg.demand.low, cfg.demand.high + 1))
        units = need
        if node.params.strategy == OVER_REQUESTER:
            units = int(round(need * node.params.multiplier))
        units = max(1, min(units, int(node.params.download_capacity / cfg.allocator.unit)))
        file_id: Optional[int] = None
        if state.holders:
            if not node.wanted:
                continue
            file_id = node.wanted[int(node.rng.integers(len(node.wanted)))]
        server_id = _choose_server(state, node, file_id, iteration)
        if server_id is None:
            continue
        nodes[server_id].incoming.append((node.id, units, iteration))
        node.outstanding = True
        acc.queries[node.id] += 1

    # phase 2: servers enqueue, trigger, select, allocate; grants land now
    x = cfg.exponent
    for server in nodes:
        if server.incoming:
            pend = server.alloc.pending
            for rid, units, arrival in server.incoming:
                eff = effective_reputation(server.table, rid,
                                           units * cfg.allocator.unit,
                                           server.params.download_capacity,
                                           state.newcomer)
                pend.append(AllocationRequest(rid, units, arrival, eff))
            server.incoming.clear()
        pending = server.alloc.pending
        if not pending:
            continue
        acc.pending_n[server.id] = len(pending)
        cap_units = server.shared_units
        if cap_units <= 0:
            for req in pending:
                _resolve(state, nodes[req.requester], server, req.units, 0,
                         iteration, acc)
            pending.clear()
            continue
        oldest = iteration - min(r.arrival for r in pending)
        if acq:
            selected = alloc_mod.canonical_order(pending)
        elif alloc_mod.serving_trigger(pending, server.alloc.threshold, oldest,
                                       server.alloc.timeout):
            selected = alloc_mod.select_requesters(pending, x, server.alloc.gain,
                                                   server.rng)
        else:
            continue
        grants = alloc_mod.allocate_capacity(selected, cap_units, x)
        granted_total = sum(grants.values())
        for req in alloc_mod.canonical_order(pending):
            _resolve(state, nodes[req.requester], server, req.units,
                     grants.get(req.requester, 0), iteration, acc)
        pending.clear()
        acc.selected_n[server.id] = len(selected)
        acc.granted_n[server.id] = granted_total
        server.util_sum += granted_total / cap_units
        server.ful_num += granted_total
        server.ful_den += sum(r.units for r in selected)

    # phase 3 (observations, tables, interaction stats) ran inside _resolve

    # phase 4: windowed adaptation and capacity reviews
    win = cfg.allocator.window
    if (iteration + 1) % win == 0:
        for node in nodes:
            utilization = node.util_sum / win
            fulfil = node.ful_num / node.ful_den if node.ful_den else 1.0
            alloc_mod.adjust_gain(node.alloc, utilization, fulfil)
            node.util_sum = 0.0
            node.ful_num = node.ful_den = 0

            answer_rate = (node.answered_win / node.resolved_win
                           if node.resolved_win else 1.0)
            int_mod.adapt_base(node.icfg, answer_rate,
                               factor=cfg.interest.base_factor,
                               rate_ok=cfg.interest.answer_ok,
                               rate_high=cfg.interest.answer_high,
                               base_min=cfg.interest.base_min)
            node.resolved_win = node.answered_win = 0

            current = frozenset(node.ranked)
            churn = 1.0 - len(current & node.ranked_prev) / len(current) if current else 1.0
            int_mod.adapt_alpha(node.icfg, iteration + 1, churn,
                                alpha_high=cfg.interest.alpha_high,
                                alpha_low=cfg.interest.alpha_low,
                                decay=cfg.interest.alpha_decay,
                                warmup=cfg.interest.warmup,
                                churn_threshold=cfg.interest.churn_threshold)
            node.ranked_prev = current

    period = cfg.controller.period
    if (iteration + 1) % period == 0:
        for node in nodes:
            if node.cap is None:
                node.recv_period = 0
                continue
            download = node.recv_period * cfg.allocator.unit / period
            node.recent_downloads.append(download)
            if len(node.recent_downloads) >= 2:
                arr = np.asarray(node.recent_downloads)
                node.cap.epsilon = cap_mod.tune_epsilon(
                    float(arr.var()), cfg.controller.epsilon_coeff,
                    cfg.controller.epsilon_min)
            cap_mod.review(node.cap, download)
            node.shared_units = int(node.cap.shared / cfg.allocator.unit)
            node.alloc.capacity_units = node.shared_units
            node.review_count += 1
            state.capacity_rows.append(
                (node.id, node.review_count, node.cap.shared, node.cap.action,
                 download))
            node.recv_period = 0

    if cfg.metrics.alloc_interval and (iteration + 1) % cfg.metrics.alloc_interval == 0:
        for node in nodes:
            cap_units = node.shared_units
            util = acc.granted_n[node.id] / cap_units if cap_units > 0 else 0.0
            state.alloc_rows.append(
                (iteration, node.id, acc.pending_n[node.id],
                 acc.selected_n[node.id], acc.granted_n[node.id], util,
                 node.alloc.gain))

    rows = [
        (iteration, n.id, acc.requested[n.id], acc.received[n.id],
         acc.served[n.id], acc.queries[n.id])
        for n in nodes
    ]
    state.iteration = iteration + 1
    return rows


# ---------------------------------------------------------------------------
# query routing trials


def query_routing_trial(state: SimState, querier: NodeId, file_id: int,
                        mode: str = "interest",
                        rng: np.random.Generator | None = None) -> int:
    """Probe peers for a file holder; returns probes used, capped at TTL.

    interest mode walks the querier's ranked server list; baseline mode
    walks a uniformly random permutation of peers. An unresolved query
    costs the full TTL.
    """
    cfg = state.config
    node = state.nodes[querier]
    holder_set = set(state.holders[file_id]) - {querier}
    others = [i for i in state.all_ids if i != querier]
    if mode == "interest":
        wide = InterestConfig(base=node.icfg.base, alpha=node.icfg.alpha,
                              neighbor_count=len(others))
        order = int_mod.rank_servers(node.stats, node.table, wide, others,
                                     state.newcomer)
    elif mode == "baseline":
        gen = rng if rng is not None else state.trial_rng
        order = [others[int(i)] for i in gen.permutation(len(others))]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    probes = 0
    for peer in order:
        probes += 1
        if peer in holder_set:
            return probes
        if probes >= cfg.routing.ttl:
            break
    return cfg.routing.ttl


def _run_trials(state: SimState, iteration: int, series: MetricsSeries):
    cfg = state.config
    n_trial = min(cfg.routing.trial_nodes, len(state.nodes))
    picked = state.trial_rng.choice(len(state.nodes), size=n_trial, replace=False)
    for qid in sorted(int(q) for q in picked):
        node = state.nodes[qid]
        if not node.wanted:
            continue
        fid = node.wanted[int(state.trial_rng.integers(len(node.wanted)))]
        p_int = query_routing_trial(state, qid, fid, "interest")
        p_base = query_routing_trial(state, qid, fid, "baseline")
        series.query_rows.append((iteration, qid, "interest", 1, p_int))
        series.query_rows.append((iteration, qid, "baseline", 1, p_base))


# ---------------------------------------------------------------------------
# full run


def _neighbor_scores(state: SimState, node: _Node) -> list[tuple[NodeId, float]]:
    out = []
    for peer in node.ranked:
        entry = node.table.entries.get(peer)
        rep = state.newcomer if entry is None else entry.score
        sim = int_mod.similarity(node.stats.total.get(peer, 0),
                                 node.stats.answered.get(peer, 0), node.icfg.base)
        out.append((peer, int_mod.combined_score(sim, rep, node.icfg.alpha)))
    return out


def run(config: ScenarioConfig) -> MetricsSeries:
    """Build the network and step through every iteration; pure in
    (config, seed): identical inputs give identical series."""
    state = build_network(config)
    series = MetricsSeries()
    mcfg = config.metrics
    for it in range(config.iterations):
        series.node_rows.extend(step(state, it))
        if (config.routing.trial_nodes > 0 and state.holders
                and it >= config.routing.measure_from):
            _run_trials(state, it, series)
        if mcfg.reputation_interval and (it + 1) % mcfg.reputation_interval == 0:
            for node in state.nodes:
                for owner, peer, score, n_obs in dump_rows(node.table):
                    series.reputation_rows.append((it, owner, peer, score, n_obs))
        if mcfg.neighbor_interval and (it + 1) % mcfg.neighbor_interval == 0:
            for node in state.nodes:
                for pos, (peer, score) in enumerate(_neighbor_scores(state, node)):
                    series.neighbor_rows.append((it, node.id, pos, peer, score))
    series.capacity_rows = state.capacity_rows
    series.alloc_rows = state.alloc_rows
    _aggregate(config, state, series)
    return series


def _aggregate(config: ScenarioConfig, state: SimState, series: MetricsSeries):
    post = [r for r in series.node_rows if r[0] >= config.acquaintance]
    if post:
        series.aggregates["received_mean"] = sum(r[3] for r in post) / len(post)
    label_of = {n.id: n.label for n in state.nodes}
    for label in sorted({n.label for n in state.nodes}):
        rows = [r for r in post if label_of[r[1]] == label]
        if rows and label:
            series.aggregates[f"received_mean[{label}]"] = (
                sum(r[3] for r in rows) / len(rows))
    contributors = {n.id for n in state.nodes if n.params.strategy != FREE_RIDER}
    crows = [r for r in post if r[1] in contributors]
    if crows:
        series.aggregates["contributor_received_mean"] = (
            sum(r[3] for r in crows) / len(crows))
    for mode in ("interest", "baseline"):
        qrows = [r for r in series.query_rows if r[2] == mode]
        if qrows:
            series.aggregates[f"probes_mean[{mode}]"] = (
                sum(r[4] for r in qrows) / sum(r[3] for r in qrows))
