"""Exhaustive ground-truth solvers for tiny instances, used by the tests.

exact_solve enumerates every depot-terminated visit sequence within a per
station visit bound and keeps the cheapest one that passes the flow check.
enumerate_displacements decides feasibility of one route by brute force over
all per-visit operation vectors, independently of the flow machinery, so the
two can arbitrate each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from sbrp.feasibility import check
from sbrp.instance import Instance


class LimitExceeded(ValueError):
    """Instance or route falls outside the enumeration bounds."""


@dataclass(frozen=True)
class OracleLimits:
    max_stations: int = 6
    max_visits_per_station: int = 2
    max_route_length: int = 18


def exact_solve(instance: Instance, limits: OracleLimits = OracleLimits()) -> tuple[int, tuple[int, ...]]:
    """Minimum cost over all feasible routes within the visit bound.

    Depth-first enumeration over visit sequences without adjacent repeats
    (an adjacent repeat can always be merged at equal cost), pruned by a cost
    lower bound.  Raises LimitExceeded rather than silently truncating.
    """
    if instance.n > limits.max_stations:
        raise LimitExceeded(f"instance has {instance.n} stations, limit {limits.max_stations}")
    if instance.n * limits.max_visits_per_station > limits.max_route_length:
        raise LimitExceeded("visit bound times station count exceeds the route length limit")
    n = instance.n
    cost = instance.cost
    required = [s.id for s in instance.stations[1:] if s.demand != 0]
    budget = [limits.max_visits_per_station] * (n + 1)
    budget[0] = 0
    min_in = [int(min(cost[j, i] for j in range(n + 1) if j != i)) for i in range(n + 1)]

    best_cost = None
    best_route = None
    route = [0]

    def lower_bound(partial: int, unvisited_required) -> int:
        lb = partial + sum(min_in[s] for s in unvisited_required)
        lb += min_in[0]  # the route still has to re-enter the depot
        return lb

    def dfs(partial: int, unvisited_required: set):
        nonlocal best_cost, best_route
        if best_cost is not None and lower_bound(partial, unvisited_required) >= best_cost:
            return
        pos = route[-1]
        if not unvisited_required:
            total = partial + int(cost[pos, 0])
            if best_cost is None or total < best_cost:
                closed = route + [0]
                if check(closed, instance).feasible:
                    best_cost = total
                    best_route = tuple(closed)
        for s in range(1, n + 1):
            if budget[s] == 0 or s == pos:
                continue
            budget[s] -= 1
            route.append(s)
            dfs(partial + int(cost[pos, s]),
                unvisited_required - {s} if s in unvisited_required else unvisited_required)
            route.pop()
            budget[s] += 1

    dfs(0, set(required))
    if best_cost is None:
        raise RuntimeError("no feasible route within the visit bound")
    return best_cost, best_route


def enumerate_displacements(route, instance: Instance,
                            max_route_length: int = 14) -> tuple[bool, tuple[int, ...] | None]:
    """Brute-force feasibility of one route: search all operation vectors.

    Operations must keep the vehicle load in [0, Q] and every station level in
    [0, q]; the vehicle leaves and returns empty and every station must sit at
    its target after its last visit.  Returns a witness schedule if one exists.
    """
    if len(route) > max_route_length:
        raise LimitExceeded(f"route length {len(route)} exceeds bound {max_route_length}")
    if route[0] != 0 or route[-1] != 0:
        raise ValueError("route must start and end at the depot")
    for s in instance.stations[1:]:
        if s.demand != 0 and s.id not in route:
            return False, None
    q_vehicle = instance.vehicle_capacity
    last_visit = {}
    for pos in range(1, len(route) - 1):
        last_visit[route[pos]] = pos
    levels = {s.id: s.initial for s in instance.stations[1:]}
    ops = [0] * len(route)
    seen_dead = set()

    def dfs(pos: int, load: int) -> bool:
        if pos == len(route) - 1:
            return load == 0
        key = (pos, load, tuple(sorted(levels.items())))
        if key in seen_dead:
            return False
        sid = route[pos]
        st = instance.stations[sid]
        level = levels[sid]
        lo = max(-load, level - st.capacity)       # most the vehicle can drop here
        hi = min(q_vehicle - load, level)          # most it can take
        for op in range(hi, lo - 1, -1):
            new_level = level - op
            if last_visit[sid] == pos and new_level != st.target:
                continue
            levels[sid] = new_level
            if dfs(pos + 1, load + op):
                ops[pos] = op
                levels[sid] = level
                return True
            levels[sid] = level
        seen_dead.add(key)
        return False

    if dfs(1, 0):
        return True, tuple(ops)
    return False, None
