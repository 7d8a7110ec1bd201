import numpy as np
import pytest

from sbrp.instance import Instance, Station, build_cost_matrix


def random_instance(rng, n, q_vehicle, dmax=3, box=60, name=None):
    """Balanced random instance: demands in [-dmax, dmax] summing to 0."""
    while True:
        d = rng.integers(-dmax, dmax + 1, size=n)
        d[-1] -= d.sum()
        if abs(d[-1]) <= dmax:
            break
    coords = [(0, 0)] + [tuple(int(v) for v in rng.integers(0, box, size=2))
                         for _ in range(n)]
    stations = [Station(0, *coords[0], 0, 0, 0, 0)]
    for i, di in enumerate(d, start=1):
        di = int(di)
        cap = int(rng.integers(max(abs(di), 3), 9))
        init = int(rng.integers(max(0, -di), cap - max(di, 0) + 1))
        stations.append(Station(i, *coords[i], di, init, init + di, cap))
    return Instance(name or f"rnd{n}", n, q_vehicle,
                    tuple(stations), build_cost_matrix(coords))


def alpha_style_instance(rng, n, q_vehicle, name=None):
    """Benchmark-style instance: inventories 10/10+d/20, demands in [-10, 10]."""
    while True:
        d = rng.integers(-10, 11, size=n)
        d[-1] -= d.sum()
        if abs(d[-1]) <= 10:
            break
    coords = [(0, 0)] + [tuple(int(v) for v in rng.integers(0, 1000, size=2))
                         for _ in range(n)]
    stations = [Station(0, *coords[0], 0, 0, 0, 0)]
    for i, di in enumerate(d, start=1):
        di = int(di)
        stations.append(Station(i, *coords[i], di, 10, 10 + di, 20))
    return Instance(name or f"rnd{n}a", n, q_vehicle,
                    tuple(stations), build_cost_matrix(coords))


def random_route(rng, instance, extra=0):
    """Random depot-terminated route covering all demanded stations."""
    ids = [s.id for s in instance.stations[1:] if s.demand != 0]
    ids += [int(x) for x in rng.integers(1, instance.n + 1, size=extra)]
    order = [ids[i] for i in rng.permutation(len(ids))]
    route = [0]
    for s in order:
        if route[-1] != s:
            route.append(s)
    route.append(0)
    return route


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
