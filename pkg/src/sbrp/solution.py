"""Solution representation: route, displacement schedule and bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass

from sbrp.feasibility import check
from sbrp.instance import Instance


@dataclass(frozen=True)
class Solution:
    """A depot-terminated visit sequence with its schedule and cost.

    cost is always the plain arc-cost sum of the route; objective() adds the
    infeasibility sentinel used for comparisons during the search.
    """

    route: tuple[int, ...]
    operations: tuple[int, ...]
    loads: tuple[int, ...]
    visit_count: tuple[int, ...]
    cost: int
    feasible: bool

    @property
    def objective(self) -> float:
        return self.cost if self.feasible else math.inf

    @property
    def visits(self) -> int:
        """Number of station visits (depot endpoints excluded)."""
        return len(self.route) - 2


def route_cost(route, instance: Instance) -> int:
    c = instance.cost
    return int(sum(c[a, b] for a, b in zip(route, route[1:])))


def count_visits(route, n: int) -> tuple[int, ...]:
    counts = [0] * (n + 1)
    for v in route[1:-1]:
        counts[v] += 1
    return tuple(counts)


def evaluate(route, instance: Instance) -> Solution:
    """Build a Solution from scratch: flow check, schedule, counts and cost."""
    res = check(route, instance)
    return Solution(
        route=tuple(route),
        operations=res.operations,
        loads=res.loads,
        visit_count=count_visits(route, instance.n),
        cost=route_cost(route, instance),
        feasible=res.feasible,
    )


def rebuild_bookkeeping(solution: Solution, instance: Instance) -> Solution:
    """Refresh schedule, counts, cost and the feasibility flag from the route."""
    return evaluate(solution.route, instance)


def serialize_solution(solution: Solution) -> str:
    """One header line "cost C feasible {0|1}", then "station op load" per visit."""
    lines = [f"cost {solution.cost} feasible {1 if solution.feasible else 0}"]
    loads_after = solution.loads + (0,)
    for sid, op, load in zip(solution.route, solution.operations, loads_after):
        lines.append(f"{sid} {op} {load}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> tuple[int, bool, tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Inverse of serialize_solution.

    Returns (cost, feasible, route, operations, loads_after) where loads_after
    has one entry per visit, the last of which should be 0.
    """
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty solution document")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "cost" or head[2] != "feasible":
        raise ValueError("bad solution header, expected 'cost C feasible {0|1}'")
    cost = int(head[1])
    feasible = head[3] == "1"
    route, ops, loads = [], [], []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"bad visit row: {ln!r}")
        route.append(int(parts[0]))
        ops.append(int(parts[1]))
        loads.append(int(parts[2]))
    if len(route) < 2:
        raise ValueError("solution must contain at least the two depot visits")
    return cost, feasible, tuple(route), tuple(ops), tuple(loads)
