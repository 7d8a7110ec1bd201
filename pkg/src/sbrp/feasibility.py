"""Route feasibility: does a visit sequence admit a valid displacement plan?

A route is encoded as a flow network: the source feeds each station's first
visit with its initial stock, each station's last visit feeds the sink with
its target stock, consecutive visits are linked by vehicle-capacity arcs, and
repeat visits to the same station are linked by station-capacity arcs.  The
route is feasible exactly when the maximum flow uses every unit of initial
stock and every station with demand appears in the sequence.  The flow also
yields per-visit operations and per-leg vehicle loads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbrp import _kernels
from sbrp.instance import Instance
from sbrp.maxflow import FlowNetwork, max_flow


@dataclass(frozen=True)
class FeasibilityResult:
    """Verdict plus the displacement schedule extracted from the max flow.

    operations[j] is the number of bikes collected (negative: delivered) at
    visit j; loads[j] is the vehicle load on the leg leaving visit j.  The
    achieved_* tuples give, per station, how much of the initial stock the
    flow accounted for and how much of the target it reached; for infeasible
    routes they locate the unbalanced stations.
    """

    feasible: bool
    operations: tuple[int, ...]
    loads: tuple[int, ...]
    achieved_initial: tuple[int, ...]
    achieved_final: tuple[int, ...]


def _check_route(route) -> None:
    if len(route) < 2 or route[0] != 0 or route[-1] != 0:
        raise ValueError("route must start and end at the depot (station 0)")
    for v in route[1:-1]:
        if v == 0:
            raise ValueError("depot may only appear at the route endpoints")


def build_network(route, instance: Instance) -> FlowNetwork:
    """Flow network for a depot-terminated visit sequence.

    Node 0 is the source (departing depot), node k-1 the sink (returning
    depot), nodes 1..k-2 the visits in order.  The two depot legs carry
    capacity 0: the vehicle leaves and returns empty.
    """
    _check_route(route)
    k = len(route)
    q_vehicle = instance.vehicle_capacity
    net = FlowNetwork(node_count=k, source=0, sink=k - 1)
    for leg in range(k - 1):
        cap = q_vehicle if 1 <= leg <= k - 3 else 0
        net.add_arc(leg, leg + 1, cap, ("b", leg))
    last_seen: dict[int, int] = {}
    for pos in range(1, k - 1):
        sid = route[pos]
        st = instance.stations[sid]
        if sid not in last_seen:
            net.add_arc(0, pos, st.initial, ("u", sid))
        else:
            prev = last_seen[sid]
            net.add_arc(prev, pos, st.capacity, ("d", sid, prev))
        last_seen[sid] = pos
    for sid, pos in sorted(last_seen.items()):
        net.add_arc(pos, k - 1, instance.stations[sid].target, ("w", sid))
    return net


def extract_displacements(network: FlowNetwork, flows) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(operations, loads) implied by a flow on a network from build_network."""
    legs = {}
    for arc, f in zip(network.arcs, flows):
        if arc.tag and arc.tag[0] == "b":
            legs[arc.tag[1]] = f
    loads = tuple(legs[j] for j in range(len(legs)))
    ops = [0] * (len(loads) + 1)
    for pos in range(1, len(loads)):
        ops[pos] = loads[pos] - loads[pos - 1]
    return tuple(ops), loads


def check(route, instance: Instance) -> FeasibilityResult:
    """Decide feasibility of a route and extract its displacement schedule.

    Feasible means the max flow saturates every initial-stock arc and every
    station with nonzero demand is visited.  Infeasible routes still get the
    best-effort schedule so the repair step can read achieved levels.  Runs
    in the compiled kernel; check_via_network is the equivalent object-level
    path.
    """
    _check_route(route)
    r = np.asarray(route, dtype=np.int64)
    status, loads, ach_i, ach_f = _kernels.eval_route(
        r, instance.initials, instance.targets, instance.capacities,
        instance.vehicle_capacity)
    loads = tuple(int(x) for x in loads)
    ops = [0] * len(route)
    for pos in range(1, len(loads)):
        ops[pos] = loads[pos] - loads[pos - 1]
    return FeasibilityResult(bool(status), tuple(ops), loads,
                             tuple(int(x) for x in ach_i),
                             tuple(int(x) for x in ach_f))


def check_via_network(route, instance: Instance) -> FeasibilityResult:
    """check() computed through the explicit FlowNetwork objects.

    Slower than check but auditable piece by piece; both must agree exactly.
    """
    net = build_network(route, instance)
    _, flows = max_flow(net)
    ach_init = [0] * (instance.n + 1)
    ach_fin = [0] * (instance.n + 1)
    saturated = True
    for arc, f in zip(net.arcs, flows):
        kind = arc.tag[0]
        if kind == "u":
            ach_init[arc.tag[1]] = f
            if f < arc.capacity:
                saturated = False
        elif kind == "w":
            ach_fin[arc.tag[1]] = f
    visited = set(route)
    covered = all(s.demand == 0 or s.id in visited for s in instance.stations)
    ops, loads = extract_displacements(net, flows)
    return FeasibilityResult(saturated and covered, ops, loads,
                             tuple(ach_init), tuple(ach_fin))
