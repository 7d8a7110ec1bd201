"""RVND local search over six route neighborhoods.

Each neighborhood scan ranks every candidate by exact cost delta and accepts
the first (i.e. cheapest) one that passes the feasibility check, which is the
best feasible improving move; the scan itself runs in a compiled kernel.
Neighborhoods are examined in random order: an improvement resets the list, a
failure removes the neighborhood, and the search stops when the list is
empty.  Only feasible moves are ever accepted; on an infeasible input any
feasible neighbor counts as improving.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from sbrp import _kernels
from sbrp.instance import Instance
from sbrp.solution import Solution, evaluate


class Neighborhood(IntEnum):
    REINSERTION = 1
    OR_OPT2 = 2
    OR_OPT3 = 3
    TWO_OPT = 4
    SWAP = 5
    SUPPRESSION = 6


ALL_NEIGHBORHOODS = tuple(Neighborhood)

_BLOCK = {Neighborhood.REINSERTION: 1, Neighborhood.OR_OPT2: 2, Neighborhood.OR_OPT3: 3}


@dataclass(frozen=True)
class Move:
    neighborhood: Neighborhood
    indices: tuple[int, ...]
    delta_cost: int
    resulting_route: tuple[int, ...]
    solution: Solution | None = None


def _apply_block_move(route, p, j, block):
    seg = route[p:p + block]
    rest = route[:p] + route[p + block:]
    jj = j if j < p else j - block
    return rest[:jj + 1] + seg + rest[jj + 1:]


def _apply_two_opt(route, a, b):
    return route[:a + 1] + route[a + 1:b + 1][::-1] + route[b + 1:]


def _apply_swap(route, p, q):
    r = list(route)
    r[p], r[q] = r[q], r[p]
    return tuple(r)


def _suppression_positions(solution: Solution, instance: Instance):
    """Internal positions whose removal is allowed: zero-demand visits and
    repeat visits to multiply-visited stations."""
    demands = instance.demands
    counts = solution.visit_count
    return [pos for pos in range(1, len(solution.route) - 1)
            if demands[solution.route[pos]] == 0 or counts[solution.route[pos]] >= 2]


def best_move(solution: Solution, instance: Instance,
              neighborhood: Neighborhood,
              cache: dict | None = None) -> Move | None:
    """Best feasible improving move in one neighborhood, or None.

    The scan is a pure function of the route, so callers that revisit routes
    (the ILS driver re-perturbs the same incumbent many times) pass a memo
    dict to skip repeated scans.
    """
    if cache is not None:
        key = (solution.route, neighborhood)
        hit = cache.get(key, False)
        if hit is not False:
            return hit
    move = _scan_neighborhood(solution, instance, neighborhood)
    if cache is not None:
        if len(cache) > 300_000:
            cache.clear()
        cache[key] = move
    return move


def _scan_neighborhood(solution: Solution, instance: Instance,
                       neighborhood: Neighborhood) -> Move | None:
    route = np.asarray(solution.route, dtype=np.int64)
    args = (instance.cost,)
    levels = (instance.initials, instance.targets, instance.capacities,
              instance.vehicle_capacity)
    improving = solution.feasible
    if neighborhood in _BLOCK:
        block = _BLOCK[neighborhood]
        found, p, j, delta = _kernels.scan_block(route, *args, block, *levels, improving)
        if not found:
            return None
        new_route = _apply_block_move(solution.route, int(p), int(j), block)
        indices = (int(p), int(j))
    elif neighborhood == Neighborhood.TWO_OPT:
        found, a, b, delta = _kernels.scan_two_opt(route, *args, *levels, improving)
        if not found:
            return None
        new_route = _apply_two_opt(solution.route, int(a), int(b))
        indices = (int(a), int(b))
    elif neighborhood == Neighborhood.SWAP:
        found, p, q, delta = _kernels.scan_swap(route, *args, *levels, improving)
        if not found:
            return None
        new_route = _apply_swap(solution.route, int(p), int(q))
        indices = (int(p), int(q))
    else:
        found, p, _, delta = _kernels.scan_suppression(route, *args, *levels, improving)
        if not found:
            return None
        new_route = solution.route[:int(p)] + solution.route[int(p) + 1:]
        indices = (int(p),)
    cand = evaluate(new_route, instance)
    return Move(neighborhood, indices, int(delta), tuple(new_route), cand)


def best_move_reinsertion(solution, instance):
    return best_move(solution, instance, Neighborhood.REINSERTION)


def best_move_oropt2(solution, instance):
    return best_move(solution, instance, Neighborhood.OR_OPT2)


def best_move_oropt3(solution, instance):
    return best_move(solution, instance, Neighborhood.OR_OPT3)


def best_move_twoopt(solution, instance):
    return best_move(solution, instance, Neighborhood.TWO_OPT)


def best_move_swap(solution, instance):
    return best_move(solution, instance, Neighborhood.SWAP)


def best_move_suppression(solution, instance):
    return best_move(solution, instance, Neighborhood.SUPPRESSION)


def _lacks_coverage(solution: Solution, instance: Instance) -> bool:
    counts = solution.visit_count
    return any(s.demand != 0 and counts[s.id] == 0 for s in instance.stations[1:])


def rvnd(solution: Solution, instance: Instance, rng: np.random.Generator,
         deadline: float | None = None, cache: dict | None = None) -> Solution:
    """Descend until all six neighborhoods fail to produce a feasible improvement."""
    if _lacks_coverage(solution, instance):
        # no neighborhood reinserts a missing station, so every scan must fail
        return solution
    pool = list(ALL_NEIGHBORHOODS)
    while pool:
        if deadline is not None and time.perf_counter() >= deadline:
            break
        nb = pool[int(rng.integers(len(pool)))]
        mv = best_move(solution, instance, nb, cache)
        if mv is None:
            pool.remove(nb)
        else:
            solution = mv.solution
            pool = list(ALL_NEIGHBORHOODS)
    return solution
