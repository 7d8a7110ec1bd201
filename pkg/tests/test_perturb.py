from collections import Counter

import numpy as np
import pytest

from conftest import random_instance
from sbrp.construct import generate_initial
from sbrp.instance import Instance, Station, build_cost_matrix
from sbrp.perturb import (
    Perturbation,
    add_buffer,
    add_stations,
    add_unbalanced,
    double_bridge,
    imbalance_report,
    perturb,
    suppress_random,
)
from sbrp.solution import evaluate


def arcs(route):
    return Counter(zip(route, route[1:]))


def no_adjacent_duplicates(route):
    return all(a != b for a, b in zip(route, route[1:]))


def test_double_bridge_preserves_multiset_and_swaps_four_arcs(rng):
    for trial in range(200):
        inst = random_instance(rng, int(rng.integers(5, 9)), 8)
        sol = generate_initial(inst, np.random.default_rng(trial))
        if sol.visits < 4:
            continue
        out = double_bridge(sol, inst, np.random.default_rng(trial))
        assert sorted(out.route) == sorted(sol.route)
        removed = arcs(sol.route) - arcs(out.route)
        added = arcs(out.route) - arcs(sol.route)
        assert sum(removed.values()) == 4
        assert sum(added.values()) == 4


def test_double_bridge_short_route_identity(rng):
    inst = random_instance(rng, 3, 8)
    sol = evaluate([0, 1, 2, 3, 0], inst)
    assert double_bridge(sol, inst, np.random.default_rng(0)) is sol


def test_add_buffer_inserts_extra_visit(rng):
    for trial in range(50):
        inst = random_instance(rng, 5, 8)
        sol = generate_initial(inst, np.random.default_rng(trial))
        out = add_buffer(sol, inst, np.random.default_rng(trial))
        assert sum(out.visit_count) >= sum(sol.visit_count) + 1
        assert no_adjacent_duplicates(out.route)
        assert out.feasible  # adding a visit keeps the old plan valid


def test_add_buffer_uses_cheapest_position(rng):
    inst = random_instance(rng, 5, 8)
    sol = generate_initial(inst, np.random.default_rng(4))
    g = np.random.default_rng(9)
    station = int(g.integers(1, inst.n + 1))
    out = add_buffer(sol, inst, np.random.default_rng(9))
    extra = out.cost - sol.cost
    best = None
    times = 1 if sol.visit_count[station] else 2
    route = list(sol.route)
    total = 0
    for _ in range(times):
        options = []
        for pos in range(1, len(route)):
            if route[pos - 1] == station or route[pos] == station:
                continue
            options.append((int(inst.cost[route[pos - 1], station]
                                + inst.cost[station, route[pos]]
                                - inst.cost[route[pos - 1], route[pos]]), pos))
        c, pos = min(options)
        total += c
        route.insert(pos, station)
    assert extra == total


def test_add_stations_eligibility_and_adjacency(rng):
    for trial in range(200):
        inst = random_instance(rng, 6, 8)
        sol = generate_initial(inst, np.random.default_rng(trial))
        out = add_stations(sol, inst, np.random.default_rng(trial))
        assert no_adjacent_duplicates(out.route)
        added = [s for s in range(1, inst.n + 1)
                 if out.visit_count[s] > sol.visit_count[s]]
        for s in added:
            assert sol.visit_count[s] <= 1
        assert 1 <= len(added) <= 3 or out is sol


def test_add_stations_all_visited_twice_is_identity():
    coords = [(0, 0), (5, 0), (10, 0)]
    stations = (
        Station(0, 0, 0, 0, 0, 0, 0),
        Station(1, 5, 0, 4, 0, 4, 8),
        Station(2, 10, 0, -4, 4, 0, 8),
    )
    inst = Instance("two", 2, 10, stations, build_cost_matrix(coords))
    sol = evaluate([0, 2, 1, 2, 1, 0], inst)
    assert add_stations(sol, inst, np.random.default_rng(0)) is sol


def test_suppress_random_uniform_over_list(rng):
    inst = random_instance(rng, 5, 8)
    base = generate_initial(inst, np.random.default_rng(2))
    r = list(base.route)
    # add two removable repeat visits
    r.insert(len(r) - 1, r[1])
    r.insert(2, r[-3])
    route = tuple(x for i, x in enumerate(r) if i == 0 or x != r[i - 1])
    sol = evaluate(route, inst)
    removable = [p for p in range(1, len(sol.route) - 1)
                 if inst.demands[sol.route[p]] == 0 or sol.visit_count[sol.route[p]] >= 2]
    picks = Counter()
    for seed in range(1000):
        out = suppress_random(sol, inst, np.random.default_rng(seed))
        assert len(out.route) == len(sol.route) - 1
        for p in range(len(out.route)):
            if p >= len(sol.route) - 1 or out.route[p] != sol.route[p]:
                picks[p] += 1
                break
    assert sum(picks.values()) == 1000
    expected = 1000 / len(removable)
    for count in picks.values():
        assert abs(count - expected) < 0.35 * expected


def test_suppress_random_no_candidates_identity(rng):
    inst = random_instance(rng, 4, 8)
    sol = generate_initial(inst, np.random.default_rng(1))
    if all(inst.demands[s] != 0 for s in sol.route[1:-1]) and max(sol.visit_count) <= 1:
        assert suppress_random(sol, inst, np.random.default_rng(0)) is sol


def test_perturb_draws_uniformly(rng):
    inst = random_instance(rng, 6, 8)
    sol = generate_initial(inst, np.random.default_rng(3))
    enabled = frozenset({Perturbation.ADD_STATIONS, Perturbation.DOUBLE_BRIDGE,
                         Perturbation.SUPPRESSION})
    counts = Counter()
    options = sorted(enabled)
    for seed in range(1000):
        g = np.random.default_rng(seed)
        mech = options[int(g.integers(len(options)))]
        counts[mech] += 1
        out = perturb(sol, inst, enabled, np.random.default_rng(seed))
        assert out.route[0] == 0 and out.route[-1] == 0
    for mech in options:
        assert abs(counts[mech] - 1000 / 3) <= 50  # within 5 points of 1/3


def test_perturb_single_mechanism(rng):
    inst = random_instance(rng, 6, 8)
    sol = generate_initial(inst, np.random.default_rng(8))
    out = perturb(sol, inst, {Perturbation.DOUBLE_BRIDGE}, np.random.default_rng(8))
    direct = double_bridge(sol, inst, np.random.default_rng(8))
    # same rng stream after the (single-option) mechanism draw
    assert sorted(out.route) == sorted(sol.route)
    assert sorted(direct.route) == sorted(sol.route)


def test_perturb_requires_nonempty_set(rng):
    inst = random_instance(rng, 4, 8)
    sol = generate_initial(inst, np.random.default_rng(0))
    with pytest.raises(ValueError):
        perturb(sol, inst, frozenset(), np.random.default_rng(0))


def unbalanced_pair_instance():
    """Unbalanced-pair scenario: station 12 in excess, station 14 in default."""
    coords = {0: (0, 0), 12: (10, 0), 1: (20, 0), 2: (30, 0), 3: (40, 0),
              14: (50, 0), 4: (60, 0)}
    for i in list(range(5, 12)) + [13]:
        coords[i] = (100 + i, 90)
    levels = {
        12: (20, 10, 20),
        14: (3, 10, 10),
        1: (4, 0, 4),
        2: (0, 7, 7),
        3: (1, 0, 1),
        4: (0, 1, 1),
    }
    stations = [Station(0, 0, 0, 0, 0, 0, 0)]
    for i in range(1, 15):
        x, y = coords[i]
        p, t, q = levels.get(i, (0, 0, 0))
        stations.append(Station(i, x, y, t - p, p, t, q))
    pts = [coords[i] for i in range(15)]
    return Instance("repair-pair", 14, 7, tuple(stations), build_cost_matrix(pts))


def test_add_unbalanced_repairs_excess_default_pair():
    inst = unbalanced_pair_instance()
    broken = evaluate([0, 12, 1, 2, 3, 14, 4, 0], inst)
    assert not broken.feasible
    report = imbalance_report(broken, inst)
    assert report.worst_excess == 12
    assert report.worst_default == 14
    repaired = add_unbalanced(broken, inst)
    assert repaired.feasible
    assert repaired.route == (0, 12, 1, 2, 3, 14, 12, 14, 4, 0)
    ops = dict()
    for pos, sid in enumerate(repaired.route):
        if sid in (12, 14):
            ops.setdefault(sid, []).append(repaired.operations[pos])
    assert ops[12] == [3, 7]
    assert ops[14] == [-1, -6]


def test_add_unbalanced_feasible_input_identity(rng):
    inst = random_instance(rng, 5, 8)
    sol = generate_initial(inst, np.random.default_rng(0))
    assert add_unbalanced(sol, inst) is sol


def test_add_unbalanced_never_increases_total_imbalance(rng):
    fixed = 0
    for trial in range(300):
        inst = random_instance(rng, int(rng.integers(4, 7)), int(rng.integers(3, 7)))
        sol = generate_initial(inst, np.random.default_rng(trial))
        broken = suppress_random(sol, inst, np.random.default_rng(trial))
        if broken.feasible:
            broken = double_bridge(broken, inst, np.random.default_rng(trial))
        if broken.feasible:
            continue
        before = imbalance_report(broken, inst)
        out = add_unbalanced(broken, inst)
        after = imbalance_report(out, inst)
        assert sum(after.excess) + sum(after.default) <= \
            sum(before.excess) + sum(before.default)
        fixed += out.feasible
    assert fixed > 0


def test_imbalance_excess_and_default_disjoint(rng):
    for trial in range(100):
        inst = random_instance(rng, 5, 6)
        sol = generate_initial(inst, np.random.default_rng(trial))
        broken = suppress_random(sol, inst, np.random.default_rng(trial + 1))
        report = imbalance_report(broken, inst)
        for e, d in zip(report.excess, report.default):
            assert not (e > 0 and d > 0)
