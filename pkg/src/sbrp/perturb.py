"""Perturbation mechanisms and the unbalanced-station repair.

Perturbations diversify around the incumbent and are allowed to leave the
route infeasible; the repair step pairs the most bike-surplus station with the
most bike-deficit one and inserts the extra visits that let the flow check
rebalance them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from sbrp.feasibility import check
from sbrp.instance import Instance
from sbrp.search import _suppression_positions
from sbrp.solution import Solution, evaluate


class Perturbation(IntEnum):
    ADD_BUFFER = 1      # P1
    ADD_STATIONS = 2    # P2
    DOUBLE_BRIDGE = 3   # P3
    SUPPRESSION = 4     # P4


@dataclass(frozen=True)
class ImbalanceReport:
    """Per-station deviation of the achievable final level from the target.

    excess[i] > 0 means station i is left holding bikes above its target,
    default[i] > 0 means it falls short.  A station is never both.
    """

    excess: tuple[int, ...]
    default: tuple[int, ...]
    worst_excess: int | None
    worst_default: int | None


def imbalance_report(solution: Solution, instance: Instance) -> ImbalanceReport:
    res = check(solution.route, instance)
    excess = [0] * (instance.n + 1)
    default = [0] * (instance.n + 1)
    for s in instance.stations[1:]:
        # unaccounted initial stock stays put, shortfall on the target side is missing
        level = s.initial - res.achieved_initial[s.id] + res.achieved_final[s.id]
        if level > s.target:
            excess[s.id] = level - s.target
        elif level < s.target:
            default[s.id] = s.target - level
    worst_e = max(range(instance.n + 1), key=lambda i: excess[i]) if any(excess) else None
    worst_d = max(range(instance.n + 1), key=lambda i: default[i]) if any(default) else None
    return ImbalanceReport(tuple(excess), tuple(default), worst_e, worst_d)


def _insertion_cost(route, station, pos, cost) -> int:
    return int(cost[route[pos - 1], station] + cost[station, route[pos]]
               - cost[route[pos - 1], route[pos]])


def _legal_slots(route, station):
    """Insertion positions that do not create adjacent visits to one station."""
    return [pos for pos in range(1, len(route))
            if route[pos - 1] != station and route[pos] != station]


def _cheapest_insert(route, station, cost):
    slots = _legal_slots(route, station)
    if not slots:
        return None
    best = min(slots, key=lambda pos: (_insertion_cost(route, station, pos, cost), pos))
    return route[:best] + [station] + route[best:]


def add_buffer(solution: Solution, instance: Instance, rng: np.random.Generator) -> Solution:
    """Extra visit to one random station at its cheapest insertion position;
    an unrouted station is inserted twice."""
    station = int(rng.integers(1, instance.n + 1))
    route = list(solution.route)
    times = 1 if solution.visit_count[station] > 0 else 2
    for _ in range(times):
        inserted = _cheapest_insert(route, station, instance.cost)
        if inserted is None:
            break
        route = inserted
    if tuple(route) == solution.route:
        return solution
    return evaluate(route, instance)


def _tail_slots(route, station):
    slots = _legal_slots(route, station)
    lo = len(route) - 1 - max(1, (len(route) - 2) // 3)
    tail = [pos for pos in slots if pos >= lo]
    return tail or slots


def add_stations(solution: Solution, instance: Instance, rng: np.random.Generator) -> Solution:
    """Extra visits to up to three stations currently visited at most once,
    placed towards the end of the route; adjacent repeats are forbidden."""
    eligible = [s.id for s in instance.stations[1:] if solution.visit_count[s.id] <= 1]
    if not eligible:
        return solution
    k = int(rng.integers(1, 4))
    k = min(k, len(eligible))
    chosen = rng.choice(np.asarray(eligible), size=k, replace=False)
    route = list(solution.route)
    for station in (int(s) for s in chosen):
        times = 1 if solution.visit_count[station] > 0 else 2
        for _ in range(times):
            slots = _tail_slots(route, station)
            if not slots:
                break
            pos = int(slots[int(rng.integers(len(slots)))])
            route = route[:pos] + [station] + route[pos:]
    if tuple(route) == solution.route:
        return solution
    return evaluate(route, instance)


def double_bridge(solution: Solution, instance: Instance, rng: np.random.Generator) -> Solution:
    """Exchange two disjoint non-adjacent internal subsequences.

    Exactly four arcs are removed and four added; the visit multiset is kept.
    Routes with fewer than 4 internal visits are returned unchanged.
    """
    route = solution.route
    m = len(route) - 2
    if m < 4:
        return solution
    while True:
        cut = np.sort(rng.integers(1, m + 1, size=4))
        a, b, c, d = (int(x) for x in cut)
        if b + 2 <= c:  # at least one visit strictly between the blocks
            break
    new_route = route[:a] + route[c:d + 1] + route[b + 1:c] + route[a:b + 1] + route[d + 1:]
    return evaluate(new_route, instance)


def suppress_random(solution: Solution, instance: Instance, rng: np.random.Generator) -> Solution:
    """Remove one random visit from the suppression list; the result may be
    infeasible."""
    positions = _suppression_positions(solution, instance)
    if not positions:
        return solution
    pos = positions[int(rng.integers(len(positions)))]
    route = solution.route[:pos] + solution.route[pos + 1:]
    return evaluate(route, instance)


def add_unbalanced(solution: Solution, instance: Instance) -> Solution:
    """One repair step: pair the most unbalanced excess/default stations.

    If the default station j is routed, visit the pair (i, j) right after the
    last visit to j; else if the excess station i is routed, visit (j, i)
    right after i; else append (i, j) before the returning depot.  The result
    is re-checked and may still be infeasible.
    """
    if solution.feasible:
        return solution
    report = imbalance_report(solution, instance)
    i, j = report.worst_excess, report.worst_default
    if i is None or j is None:
        return solution
    route = list(solution.route)
    if solution.visit_count[j] > 0:
        anchor = max(pos for pos in range(1, len(route) - 1) if route[pos] == j)
        route[anchor + 1:anchor + 1] = [i, j]
    elif solution.visit_count[i] > 0:
        anchor = max(pos for pos in range(1, len(route) - 1) if route[pos] == i)
        route[anchor + 1:anchor + 1] = [j, i]
    else:
        route[-1:-1] = [i, j]
    return evaluate(route, instance)


def perturb(solution: Solution, instance: Instance, enabled, rng: np.random.Generator) -> Solution:
    """Apply one mechanism drawn uniformly from the enabled set."""
    options = sorted(enabled)
    if not options:
        raise ValueError("enabled perturbation set must be nonempty")
    mech = options[int(rng.integers(len(options)))]
    if mech == Perturbation.ADD_BUFFER:
        return add_buffer(solution, instance, rng)
    if mech == Perturbation.ADD_STATIONS:
        return add_stations(solution, instance, rng)
    if mech == Perturbation.DOUBLE_BRIDGE:
        return double_bridge(solution, instance, rng)
    return suppress_random(solution, instance, rng)
