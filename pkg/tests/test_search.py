import itertools

import numpy as np
import pytest

from conftest import random_instance
from sbrp.construct import generate_initial
from sbrp.feasibility import check
from sbrp.search import (
    ALL_NEIGHBORHOODS,
    Neighborhood,
    best_move,
    best_move_reinsertion,
    best_move_suppression,
    rvnd,
)
from sbrp.solution import evaluate, route_cost


def strip_adjacent_duplicates(route):
    out = [route[0]]
    for s in route[1:]:
        if s != out[-1]:
            out.append(s)
    return tuple(out)


def brute_force_candidates(route, neighborhood):
    """All candidate routes of one neighborhood, by direct construction."""
    L = len(route)
    out = []
    if neighborhood in (Neighborhood.REINSERTION, Neighborhood.OR_OPT2, Neighborhood.OR_OPT3):
        blk = {Neighborhood.REINSERTION: 1, Neighborhood.OR_OPT2: 2, Neighborhood.OR_OPT3: 3}[neighborhood]
        for p in range(1, L - blk):
            seg = route[p:p + blk]
            rest = route[:p] + route[p + blk:]
            for jj in range(0, len(rest) - 1):
                cand = rest[:jj + 1] + seg + rest[jj + 1:]
                if cand == tuple(route):
                    continue
                if any(a == b for a, b in zip(cand, cand[1:])):
                    continue  # adjacent duplicates forbidden for these moves
                out.append(cand)
    elif neighborhood == Neighborhood.TWO_OPT:
        for a in range(0, L - 3):
            for b in range(a + 2, L - 1):
                out.append(route[:a + 1] + route[a + 1:b + 1][::-1] + route[b + 1:])
    elif neighborhood == Neighborhood.SWAP:
        for p in range(1, L - 1):
            for q in range(p + 1, L - 1):
                if route[p] == route[q]:
                    continue
                r = list(route)
                r[p], r[q] = r[q], r[p]
                out.append(tuple(r))
    else:
        counts = {}
        for s in route[1:-1]:
            counts[s] = counts.get(s, 0) + 1
        for p in range(1, L - 1):
            out.append(route[:p] + route[p + 1:])
    return out


def brute_force_best(solution, instance, neighborhood, demands):
    """Cheapest feasible strictly-improving candidate, or None."""
    if neighborhood == Neighborhood.SUPPRESSION:
        counts = solution.visit_count
        cands = []
        for p in range(1, len(solution.route) - 1):
            s = solution.route[p]
            if demands[s] == 0 or counts[s] >= 2:
                cands.append(solution.route[:p] + solution.route[p + 1:])
    else:
        cands = brute_force_candidates(solution.route, neighborhood)
    best = None
    for cand in cands:
        c = route_cost(cand, instance)
        if c >= solution.cost:
            continue
        if not check(cand, instance).feasible:
            continue
        if best is None or c < best:
            best = c
    return best


@pytest.mark.parametrize("neighborhood", ALL_NEIGHBORHOODS)
def test_best_move_matches_brute_force(rng, neighborhood):
    hits = 0
    for trial in range(25):
        inst = random_instance(rng, 5, int(rng.integers(4, 8)))
        sol = generate_initial(inst, np.random.default_rng(trial))
        mv = best_move(sol, inst, neighborhood)
        expected = brute_force_best(sol, inst, neighborhood, inst.demands)
        if mv is None:
            assert expected is None
        else:
            hits += 1
            assert mv.solution.feasible
            assert mv.solution.cost == expected
            assert mv.delta_cost == mv.solution.cost - sol.cost
            assert route_cost(mv.resulting_route, inst) == mv.solution.cost
    assert hits > 0


def test_accepted_delta_equals_recomputation(rng):
    for trial in range(20):
        inst = random_instance(rng, 6, 6)
        sol = generate_initial(inst, np.random.default_rng(100 + trial))
        for nb in ALL_NEIGHBORHOODS:
            mv = best_move(sol, inst, nb)
            if mv is not None:
                assert mv.delta_cost == route_cost(mv.resulting_route, inst) - sol.cost


def test_reinsertion_trivial_cases(rng):
    inst = random_instance(rng, 1, 5)
    sol = evaluate([0, 1, 0], inst)
    assert best_move_reinsertion(sol, inst) is None


def test_no_adjacent_duplicates_from_block_moves(rng):
    for trial in range(30):
        inst = random_instance(rng, 5, 5)
        sol = generate_initial(inst, np.random.default_rng(trial))
        # give the route a guaranteed repeat to tempt the move generators
        r = list(sol.route)
        r.insert(len(r) - 1, r[1])
        sol2 = evaluate(strip_adjacent_duplicates(tuple(r)), inst)
        for nb in (Neighborhood.REINSERTION, Neighborhood.OR_OPT2, Neighborhood.OR_OPT3):
            mv = best_move(sol2, inst, nb)
            if mv is not None:
                assert not any(a == b for a, b in
                               zip(mv.resulting_route, mv.resulting_route[1:]))


def test_suppression_drops_repeat_visit():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng, 4, 8)
        base = generate_initial(inst, np.random.default_rng(0))
        r = list(base.route)
        r.insert(len(r) - 1, r[1])  # pointless second visit
        padded = evaluate(strip_adjacent_duplicates(tuple(r)), inst)
        if not (padded.feasible and padded.cost > base.cost
                and len(padded.route) > len(base.route)):
            continue
        mv = best_move_suppression(padded, inst)
        assert mv is not None
        assert len(mv.resulting_route) == len(padded.route) - 1
        return
    pytest.skip("no strictly-costlier padded route found")


def test_suppression_empty_list(rng):
    inst = random_instance(rng, 4, 8)
    sol = generate_initial(inst, np.random.default_rng(7))
    if all(inst.demands[s] != 0 for s in sol.route[1:-1]) and \
            max(sol.visit_count) <= 1:
        assert best_move_suppression(sol, inst) is None


def test_rvnd_monotone_feasible_and_locally_optimal(rng):
    for trial in range(30):
        inst = random_instance(rng, int(rng.integers(4, 7)), int(rng.integers(4, 8)))
        start = generate_initial(inst, np.random.default_rng(trial))
        out = rvnd(start, inst, np.random.default_rng(trial))
        assert out.feasible
        assert out.cost <= start.cost
        for nb in ALL_NEIGHBORHOODS:
            assert brute_force_best(out, inst, nb, inst.demands) is None


def test_rvnd_deterministic(rng):
    inst = random_instance(rng, 6, 6)
    start = generate_initial(inst, np.random.default_rng(5))
    a = rvnd(start, inst, np.random.default_rng(42))
    b = rvnd(start, inst, np.random.default_rng(42))
    assert a == b


def test_rvnd_already_optimal_route_unchanged(rng):
    inst = random_instance(rng, 5, 6)
    start = generate_initial(inst, np.random.default_rng(11))
    opt = rvnd(start, inst, np.random.default_rng(0))
    again = rvnd(opt, inst, np.random.default_rng(1))
    assert again == opt


def test_rvnd_can_recover_feasibility(rng):
    # infeasible input: any feasible neighbor counts as improving
    for trial in range(40):
        inst = random_instance(rng, 4, 5)
        good = generate_initial(inst, np.random.default_rng(trial))
        r = list(good.route)
        if len(r) < 5:
            continue
        r[1], r[2] = r[2], r[1]
        broken = evaluate(strip_adjacent_duplicates(tuple(r)), inst)
        if broken.feasible:
            continue
        out = rvnd(broken, inst, np.random.default_rng(trial))
        if out.feasible:
            return
    pytest.skip("no recoverable infeasible start found")
