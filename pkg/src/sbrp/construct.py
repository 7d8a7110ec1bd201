"""Greedy randomized construction of a feasible initial solution.

Stations with unmet demand (plus a random subset of the zero-demand ones) are
kept in a randomly ordered open list.  Each round appends one visit at the end
of the partial route: the first open station whose whole residual demand fits
the current vehicle load, or, failing that, the station allowing the largest
partial exchange (ties broken by the cheapest arc from the current position).
Splits strictly reduce total residual demand, so the procedure terminates and
the result is always feasible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from sbrp.instance import Instance
from sbrp.solution import Solution, evaluate


@dataclass
class OpenVertexList:
    """Stations still owed service, in fixed random scan order."""

    order: list[int]
    residual: dict[int, int] = field(default_factory=dict)

    def remove(self, station: int) -> None:
        self.order.remove(station)

    def __bool__(self) -> bool:
        return bool(self.order)


def full_service_fits(demand: int, load: int, capacity: int) -> bool:
    """Can the whole residual demand be served in one visit at this load?

    Deliveries (demand > 0) need that many bikes on board; pickups need that
    much free space.
    """
    if demand > 0:
        return load >= demand
    return capacity - load >= -demand


def exchangeable_amount(demand: int, load: int, capacity: int) -> int:
    """Bikes movable in a single visit toward this residual demand."""
    if demand > 0:
        return min(load, demand)
    return min(capacity - load, -demand)


def best_split_candidate(ov: OpenVertexList, load: int, capacity: int,
                         position: int, cost: np.ndarray) -> tuple[int, int]:
    """Open station maximizing the exchangeable amount; ties go to the nearest."""
    best = None
    for s in ov.order:
        d = ov.residual[s]
        if d == 0:
            continue
        amount = exchangeable_amount(d, load, capacity)
        if amount <= 0:
            continue
        key = (-amount, cost[position, s])
        if best is None or key < best[0]:
            best = (key, s, amount)
    if best is None:
        raise RuntimeError("construction stalled: no exchangeable amount > 0")
    return best[1], best[2]


def _open_list(instance: Instance, rng: np.random.Generator) -> OpenVertexList:
    members = [s.id for s in instance.stations[1:] if s.demand != 0]
    zeros = [s.id for s in instance.stations[1:] if s.demand == 0]
    members += [z for z in zeros if rng.random() < 0.5]
    order = [members[i] for i in rng.permutation(len(members))]
    return OpenVertexList(order, {s: instance.stations[s].demand for s in order})


def generate_initial(instance: Instance, rng: np.random.Generator) -> Solution:
    """One constructive pass; the returned solution is feasible."""
    ov = _open_list(instance, rng)
    q = instance.vehicle_capacity
    route = [0]
    load = 0
    while ov:
        inserted = False
        for s in ov.order:
            d = ov.residual[s]
            if d == 0 or full_service_fits(d, load, q):
                route.append(s)
                load -= d
                ov.remove(s)
                inserted = True
                break
        if not inserted:
            s, amount = best_split_candidate(ov, load, q, route[-1], instance.cost)
            d = ov.residual[s]
            moved = amount if d > 0 else -amount
            route.append(s)
            load -= moved
            ov.residual[s] = d - moved
    route.append(0)
    return evaluate(route, instance)
