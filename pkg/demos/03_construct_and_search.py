"""From a greedy start to a local optimum: construction plus RVND.

The constructor keeps an open list of stations with unmet demand (plus a
random half of the balanced ones), appends whichever station it can serve
completely, and otherwise splits: it moves as many bikes as the current load
allows towards the station offering the largest exchange.  RVND then scans
six neighborhoods in random order - relocations of 1-3 visits, subsequence
reversal, visit swaps, and suppression of removable visits - accepting only
feasible strict improvements until every neighborhood fails.
"""

import numpy as np

from sbrp import bundled_path, generate_initial, load_instance, rvnd
from sbrp.search import ALL_NEIGHBORHOODS, best_move

inst = load_instance(bundled_path("n20q10D.txt"), alpha=1)
rng = np.random.default_rng(7)

sol = generate_initial(inst, rng)
print(f"constructed start: cost {sol.cost}, {sol.visits} visits, feasible {sol.feasible}")
print("route:", sol.route)

step = 0
current = sol
while True:
    moves = [(nb, best_move(current, inst, nb)) for nb in ALL_NEIGHBORHOODS]
    moves = [(nb, mv) for nb, mv in moves if mv is not None]
    if not moves:
        break
    nb, mv = min(moves, key=lambda item: item[1].delta_cost)
    step += 1
    print(f"  step {step:2d}: {nb.name:<12} delta {mv.delta_cost:+5d} -> cost {mv.solution.cost}")
    current = mv.solution
print(f"greedy descent floor: {current.cost}")

out = rvnd(sol, inst, np.random.default_rng(7))
print(f"\nrvnd from the same start: cost {out.cost}, feasible {out.feasible}")
print("route:", out.route)
print("no neighborhood improves it further:",
      all(best_move(out, inst, nb) is None for nb in ALL_NEIGHBORHOODS))
print("\nreference optimum for this instance is 5989; one descent rarely")
print("reaches it - that is what the perturbation loop is for (see demo 05).")
