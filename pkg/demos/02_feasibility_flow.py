"""Why feasibility is a flow problem, and how the schedule falls out of it.

A visit sequence fixes travel costs but not the pickup/delivery amounts:
demands may be split over repeat visits and stations can buffer bikes.  The
check builds a small network - initial stock feeds each station's first
visit, each last visit must deliver the target to the sink, consecutive
visits share the vehicle (capacity Q), repeat visits share the station's
racks (capacity q) - and the route is feasible exactly when the maximum flow
uses every unit of initial stock.  The flow on the vehicle arcs IS the load
profile, and the per-visit operations are its differences.
"""

from sbrp import build_network, check, max_flow
from sbrp.instance import Instance, Station, build_cost_matrix

coords = [(0, 0), (20, 10), (45, 15), (70, 10), (45, 40), (20, 45)]
stations = (
    Station(0, 0, 0, 0, 0, 0, 0),
    Station(1, 20, 10, 2, 3, 5, 6),    # wants 2 more bikes
    Station(2, 45, 15, -2, 4, 2, 6),   # sheds 2
    Station(3, 70, 10, 1, 1, 2, 5),
    Station(4, 45, 40, -1, 3, 2, 5),
    Station(5, 20, 45, 0, 2, 2, 4),    # balanced: visiting is optional
)
inst = Instance("demo", 5, 4, stations, build_cost_matrix(coords))

route = [0, 1, 4, 2, 3, 5, 2, 4, 1, 0]
net = build_network(route, inst)
print(f"route {route}: {net.node_count} nodes, {len(net.arcs)} arcs")
for arc in net.arcs:
    kind = {"b": "vehicle leg", "u": "initial stock", "w": "target", "d": "storage"}[arc.tag[0]]
    print(f"  {arc.tail:2d} -> {arc.head:2d}  cap {arc.capacity:2d}  ({kind} {arc.tag[1:]})")

value, flows = max_flow(net)
print("max flow value:", value, "= total initial stock on the route")

res = check(route, inst)
print("\nfeasible:", res.feasible)
print("visit   :", "  ".join(f"{s:3d}" for s in route))
print("ops     :", "  ".join(f"{o:+3d}" for o in res.operations))
print("load out:", "  ".join(f"{l:3d}" for l in res.loads), "(per leg)")

bad = [0, 1, 2, 3, 4, 0]
res_bad = check(bad, inst)
print(f"\nroute {bad} is feasible: {res_bad.feasible}")
print("  delivering to station 1 first needs bikes the empty vehicle lacks;")
print("  achieved initial stock per station:", res_bad.achieved_initial)
