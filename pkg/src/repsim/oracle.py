"""Exhaustive reference optimizer for the capacity split, and the
randomized self-check that pits the greedy allocator against it."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .allocator import AllocationRequest, allocate_capacity


def exhaustive_best(demands: list[int], capacity: int, exponent: float) -> float:
    """Maximum of sum_j (g_j/d_j)^exponent over integer grants with
    g_j <= d_j and sum g_j = min(capacity, sum d_j), by full enumeration.

    Ground truth by construction; only feasible for desk-scale instances.
    """
    total = sum(demands)
    target = min(capacity, total)

    best = -1.0

    def recurse(i: int, remaining: int, acc: float):
        nonlocal best
        if i == len(demands):
            if remaining == 0:
                best = max(best, acc)
            return
        tail = sum(demands[i:])
        if tail < remaining:
            return
        d = demands[i]
        for g in range(min(d, remaining) + 1):
            recurse(i + 1, remaining - g, acc + (g / d) ** exponent)

    recurse(0, target, 0.0)
    return best


def greedy_objective(demands: list[int], capacity: int, exponent: float) -> tuple[float, dict]:
    """Objective value the greedy allocator achieves on the same instance."""
    reqs = [
        AllocationRequest(requester=j, units=d, arrival=0, effective_rep=1.0)
        for j, d in enumerate(demands)
    ]
    grants = allocate_capacity(reqs, capacity, exponent)
    obj = sum((grants[j] / d) ** exponent for j, d in enumerate(demands))
    return obj, grants


@dataclass
class OracleReport:
    trials: int
    max_gap: float = 0.0
    feasibility_violations: int = 0
    worst_instance: tuple | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.max_gap <= 1e-9 and self.feasibility_violations == 0


def oracle_check(
    trials: int,
    seed: int,
    max_requesters: int = 4,
    max_demand: int = 8,
    max_capacity: int = 10,
    exponent: float = 0.75,
    corrupt: bool = False,
) -> OracleReport:
    """Run random instances through greedy and exhaustive search.

    `corrupt` is a negative-control hook: it perturbs the greedy grant by
    one unit so the check must fail.
    """
    rng = np.random.default_rng(seed)
    report = OracleReport(trials=trials)
    for t in range(trials):
        n = int(rng.integers(1, max_requesters + 1))
        demands = [int(rng.integers(1, max_demand + 1)) for _ in range(n)]
        capacity = int(rng.integers(1, max_capacity + 1))

        obj, grants = greedy_objective(demands, capacity, exponent)
        if corrupt and sum(grants.values()) > 0:
            # move (or drop) one unit; breaks optimality or feasibility
            donor = max(j for j, g in grants.items() if g > 0)
            receivers = [j for j, d in enumerate(demands) if grants[j] < d and j != donor]
            grants[donor] -= 1
            if receivers:
                grants[receivers[0]] += 1
            obj = sum((grants[j] / d) ** exponent for j, d in enumerate(demands))

        # feasibility
        if sum(grants.values()) != min(capacity, sum(demands)) or any(
            grants[j] > d or grants[j] < 0 for j, d in enumerate(demands)
        ):
            report.feasibility_violations += 1
            report.failures.append(f"trial {t}: infeasible grant {grants} for {demands} cap {capacity}")
            continue

        best = exhaustive_best(demands, capacity, exponent)
        gap = best - obj
        if gap > report.max_gap:
            report.max_gap = gap
            report.worst_instance = (demands, capacity, grants)
        if gap > 1e-9:
            report.failures.append(
                f"trial {t}: greedy {obj:.12f} < optimum {best:.12f} on {demands} cap {capacity}"
            )
    return report
