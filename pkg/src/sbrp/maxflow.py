"""Exact s-t maximum flow on small directed networks with integer capacities.

Shortest-augmenting-path (breadth-first residual search) with a fixed arc
iteration order, so repeated calls on the same network return the same flow
decomposition.  The inner loop is JIT-compiled when numba is available; the
same function runs as plain Python otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity: int
    tag: tuple = ()


@dataclass
class FlowNetwork:
    """Directed capacitated graph with a distinguished source and sink."""

    node_count: int
    source: int
    sink: int
    arcs: list[Arc] = field(default_factory=list)

    def add_arc(self, tail: int, head: int, capacity: int, tag: tuple = ()) -> int:
        if capacity < 0:
            raise ValueError("arc capacity must be nonnegative")
        self.arcs.append(Arc(tail, head, int(capacity), tag))
        return len(self.arcs) - 1


@njit(cache=True)
def _edmonds_karp(n, source, sink, arc_to, arc_cap, adj_first, adj_next):
    """Augment along shortest residual paths until none remains.

    Arcs come in forward/reverse pairs (i, i^1); arc_cap is mutated in place
    to the residual capacities.  Returns the max-flow value.
    """
    parent = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    total = 0
    while True:
        for i in range(n):
            parent[i] = -1
        parent[source] = -2
        queue[0] = source
        head = 0
        tail = 1
        reached = False
        while head < tail and not reached:
            u = queue[head]
            head += 1
            a = adj_first[u]
            while a != -1:
                v = arc_to[a]
                if arc_cap[a] > 0 and parent[v] == -1:
                    parent[v] = a
                    if v == sink:
                        reached = True
                        break
                    queue[tail] = v
                    tail += 1
                a = adj_next[a]
        if not reached:
            return total
        push = np.int64(2**62)
        v = sink
        while v != source:
            a = parent[v]
            if arc_cap[a] < push:
                push = arc_cap[a]
            v = arc_to[a ^ 1]
        v = sink
        while v != source:
            a = parent[v]
            arc_cap[a] -= push
            arc_cap[a ^ 1] += push
            v = arc_to[a ^ 1]
        total += push


def max_flow(network: FlowNetwork) -> tuple[int, list[int]]:
    """Maximum s-t flow value and the flow on each arc (in insertion order)."""
    m = len(network.arcs)
    n = network.node_count
    arc_to = np.empty(2 * m, dtype=np.int64)
    arc_cap = np.empty(2 * m, dtype=np.int64)
    adj_first = np.full(n, -1, dtype=np.int64)
    adj_next = np.full(2 * m, -1, dtype=np.int64)
    adj_last = np.full(n, -1, dtype=np.int64)
    for i, arc in enumerate(network.arcs):
        for k, (u, v, c) in enumerate(((arc.tail, arc.head, arc.capacity),
                                       (arc.head, arc.tail, 0))):
            a = 2 * i + k
            arc_to[a] = v
            arc_cap[a] = c
            if adj_last[u] == -1:
                adj_first[u] = a
            else:
                adj_next[adj_last[u]] = a
            adj_last[u] = a
    value = _edmonds_karp(n, network.source, network.sink, arc_to, arc_cap,
                          adj_first, adj_next)
    flows = [int(network.arcs[i].capacity - arc_cap[2 * i]) for i in range(m)]
    return int(value), flows
