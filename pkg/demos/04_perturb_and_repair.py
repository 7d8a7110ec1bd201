"""Perturbations and the unbalanced-station repair.

Four diversification mechanisms shake an incumbent: an extra buffer visit at
the cheapest slot, up to three extra visits near the route's end, a
double-bridge exchange of two subsequences, and a random suppression.  The
last two may leave the route infeasible on purpose; the repair step then
pairs the station left with surplus bikes against the one left short and
inserts the visits that let the flow check rebalance them.
"""

import numpy as np

from sbrp import (
    add_buffer,
    add_stations,
    add_unbalanced,
    double_bridge,
    evaluate,
    imbalance_report,
    suppress_random,
)
from sbrp.instance import Instance, Station, build_cost_matrix

coords = {0: (0, 0), 12: (10, 0), 1: (20, 0), 2: (30, 0), 3: (40, 0),
          14: (50, 0), 4: (60, 0)}
for i in list(range(5, 12)) + [13]:
    coords[i] = (100 + i, 90)
levels = {12: (20, 10, 20), 14: (3, 10, 10), 1: (4, 0, 4), 2: (0, 7, 7),
          3: (1, 0, 1), 4: (0, 1, 1)}
stations = [Station(0, 0, 0, 0, 0, 0, 0)]
for i in range(1, 15):
    p, t, q = levels.get(i, (0, 0, 0))
    stations.append(Station(i, *coords[i], t - p, p, t, q))
inst = Instance("repair-demo", 14, 7, tuple(stations),
                build_cost_matrix([coords[i] for i in range(15)]))

sol = evaluate([0, 12, 1, 2, 3, 14, 4, 0], inst)
print("start route:", sol.route, "feasible:", sol.feasible)
print("ops:", sol.operations, "- station 12 gives only 3 of its 10 surplus,")
print("station 14 receives only 1 of the 7 it needs.\n")

report = imbalance_report(sol, inst)
print("imbalance: excess", {i: e for i, e in enumerate(report.excess) if e},
      " default", {i: d for i, d in enumerate(report.default) if d})
print(f"worst pair: surplus at station {report.worst_excess}, "
      f"shortage at station {report.worst_default}\n")

fixed = add_unbalanced(sol, inst)
print("after repair:", fixed.route, "feasible:", fixed.feasible)
print("ops:", fixed.operations)
print("the inserted second visits collect the remaining 7 at station 12 and")
print("deliver 6 more to station 14.\n")

rng = np.random.default_rng(0)
print("perturbations on the repaired route (cost", fixed.cost, "):")
print("  add_buffer   ->", add_buffer(fixed, inst, np.random.default_rng(1)).route)
print("  add_stations ->", add_stations(fixed, inst, np.random.default_rng(2)).route)
print("  double_bridge->", double_bridge(fixed, inst, np.random.default_rng(3)).route)
shaken = suppress_random(fixed, inst, np.random.default_rng(4))
print("  suppression  ->", shaken.route, "feasible:", shaken.feasible)
print("suppression may break feasibility; the solver repairs and searches on.")
