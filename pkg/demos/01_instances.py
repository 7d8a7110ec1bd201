"""Instances: the canonical document format, inventory scaling, validation.

A station's on-disk record is just an id, planar coordinates and a raw
demand in [-10, 10].  Inventories are derived when loading: with scaling
factor alpha every station starts at 10*alpha bikes, wants 10+d times alpha,
and has 20*alpha slots.  Distances are floor-rounded Euclidean and always
recomputed from the coordinates.
"""

from sbrp import apply_alpha, build_cost_matrix, bundled_path, load_instance, parse_instance, validate
from sbrp.instance import InstanceError

doc = """\
3 10
0 0 0 0
1 30 40 -4
2 60 10 -3
3 25 85 7
"""

inst = parse_instance(doc, alpha=1, name="tiny")
print("parsed:", inst.name, "n =", inst.n, "Q =", inst.vehicle_capacity)
for s in inst.stations:
    print(f"  station {s.id}: demand {s.demand:+d}, starts {s.initial}, "
          f"wants {s.target}, capacity {s.capacity}")

print("\ncost matrix (floor of Euclidean distance):")
print(inst.cost)
print("depot-station 1 distance: floor(sqrt(30^2+40^2)) =", inst.cost[0][1])

print("\nthe same demands under alpha = 3 triple every inventory figure:")
for (p, t, q), d in zip(apply_alpha([0, -4, -3, 7], 3)[1:], (-4, -3, 7)):
    print(f"  d={d:+d} -> initial {p}, target {t}, capacity {q}")

print("\nvalidation collects every violation instead of stopping at one:")
try:
    parse_instance("2 10\n0 0 0 0\n1 1 1 5\n2 2 2 4\n")
except InstanceError as err:
    print("  rejected:", err)

print("\nflooring may break the triangle inequality by a unit; that is kept:")
pts = [(0, 0), (1, 1), (3, 3)]
c = build_cost_matrix(pts)
print(f"  c(0,1) + c(1,2) = {c[0][1] + c[1][2]} < c(0,2) = {c[0][2]}")

golden = load_instance(bundled_path("n20q10D.txt"), alpha=1)
print("\nbundled benchmark instance:", golden.name,
      f"(n={golden.n}, Q={golden.vehicle_capacity}), violations: {validate(golden)}")
