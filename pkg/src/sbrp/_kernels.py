"""JIT-compiled hot paths: route evaluation and neighborhood scanning.

These kernels mirror the object-level construction in feasibility/maxflow
arc for arc (same arc order, same augmenting strategy) so both produce the
identical flow decomposition; the test suite pins that equivalence.  Routes
without repeated stations take an exact O(k) shortcut: with single visits and
full coverage every operation is forced, so feasibility is just a prefix-load
bound check and the resulting schedule equals the flow one.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

from sbrp.maxflow import _edmonds_karp

# candidate sort keys pack (delta, flat index): key = delta * 2**20 + index
_ENC = 1048576


@njit(cache=True)
def eval_route(route, pinit, ptgt, qcap, q_vehicle):
    """Evaluate one depot-terminated route.

    Returns (status, loads, achieved_initial, achieved_final) with status 1
    when feasible.  Infeasible routes get the best-effort flow schedule.
    """
    k = route.shape[0]
    n1 = pinit.shape[0]
    loads = np.zeros(k - 1, np.int64)
    ach_i = np.zeros(n1, np.int64)
    ach_f = np.zeros(n1, np.int64)
    counts = np.zeros(n1, np.int64)
    for pos in range(1, k - 1):
        counts[route[pos]] += 1
    covered = True
    for s in range(1, n1):
        if ptgt[s] != pinit[s] and counts[s] == 0:
            covered = False
            break
    multi = False
    for pos in range(1, k - 1):
        if counts[route[pos]] > 1:
            multi = True
            break
    if covered and not multi:
        ok = True
        load = np.int64(0)
        for pos in range(1, k - 1):
            s = route[pos]
            load += pinit[s] - ptgt[s]
            if load < 0 or load > q_vehicle:
                ok = False
                break
            loads[pos] = load
        if ok:
            for pos in range(1, k - 1):
                s = route[pos]
                ach_i[s] = pinit[s]
                ach_f[s] = ptgt[s]
            return 1, loads, ach_i, ach_f
        for pos in range(k - 1):
            loads[pos] = 0

    # flow path; arc order matches feasibility.build_network exactly:
    # legs 0..k-2, then first-visit/storage arcs per position, then target
    # arcs per station in ascending id order
    m_max = (k - 1) + 2 * (k - 2)
    tails = np.empty(m_max, np.int64)
    heads = np.empty(m_max, np.int64)
    caps = np.empty(m_max, np.int64)
    u_arc = np.full(n1, -1, np.int64)
    w_arc = np.full(n1, -1, np.int64)
    m = 0
    for leg in range(k - 1):
        tails[m] = leg
        heads[m] = leg + 1
        caps[m] = q_vehicle if 1 <= leg <= k - 3 else 0
        m += 1
    last_seen = np.full(n1, -1, np.int64)
    for pos in range(1, k - 1):
        s = route[pos]
        tails[m] = 0 if last_seen[s] == -1 else last_seen[s]
        heads[m] = pos
        if last_seen[s] == -1:
            caps[m] = pinit[s]
            u_arc[s] = m
        else:
            caps[m] = qcap[s]
        last_seen[s] = pos
        m += 1
    for s in range(n1):
        if last_seen[s] != -1:
            tails[m] = last_seen[s]
            heads[m] = k - 1
            caps[m] = ptgt[s]
            w_arc[s] = m
            m += 1

    arc_to = np.empty(2 * m, np.int64)
    arc_cap = np.empty(2 * m, np.int64)
    adj_first = np.full(k, -1, np.int64)
    adj_next = np.full(2 * m, -1, np.int64)
    adj_last = np.full(k, -1, np.int64)
    for i in range(m):
        for rev in range(2):
            a = 2 * i + rev
            u = heads[i] if rev else tails[i]
            arc_to[a] = tails[i] if rev else heads[i]
            arc_cap[a] = 0 if rev else caps[i]
            if adj_last[u] == -1:
                adj_first[u] = a
            else:
                adj_next[adj_last[u]] = a
            adj_last[u] = a
    _edmonds_karp(k, 0, k - 1, arc_to, arc_cap, adj_first, adj_next)

    saturated = True
    for s in range(n1):
        a = u_arc[s]
        if a != -1:
            ach_i[s] = caps[a] - arc_cap[2 * a]
            if arc_cap[2 * a] > 0:
                saturated = False
        a = w_arc[s]
        if a != -1:
            ach_f[s] = caps[a] - arc_cap[2 * a]
    for leg in range(k - 1):
        loads[leg] = caps[leg] - arc_cap[2 * leg]
    status = 1 if (saturated and covered) else 0
    return status, loads, ach_i, ach_f


@njit(cache=True)
def _surely_infeasible(route, pinit, ptgt, qcap, q_vehicle):
    """Sound O(k) pre-filter: propagate the achievable vehicle-load interval.

    Stations visited once have a forced operation (initial - target); visits
    to multiply-visited stations are relaxed to [-capacity, +initial].  An
    empty interval, or a final interval excluding 0, proves infeasibility;
    False proves nothing.
    """
    k = route.shape[0]
    n1 = pinit.shape[0]
    counts = np.zeros(n1, np.int64)
    for pos in range(1, k - 1):
        counts[route[pos]] += 1
    seen = np.zeros(n1, np.int64)
    lo = np.int64(0)
    hi = np.int64(0)
    for pos in range(1, k - 1):
        s = route[pos]
        if counts[s] == 1:
            forced = pinit[s] - ptgt[s]
            lo += forced
            hi += forced
        elif seen[s] == 0:
            # level is exactly the initial stock on the first visit
            lo -= qcap[s] - pinit[s]
            hi += pinit[s]
        else:
            # buffering may have raised or drained the level anywhere in [0, q]
            lo -= qcap[s]
            hi += qcap[s]
        seen[s] = 1
        if lo < 0:
            lo = 0
        if hi > q_vehicle:
            hi = q_vehicle
        if lo > hi:
            return True
    return lo > 0


@njit(cache=True)
def _feasible(route, pinit, ptgt, qcap, q_vehicle):
    if _surely_infeasible(route, pinit, ptgt, qcap, q_vehicle):
        return False
    status, _, _, _ = eval_route(route, pinit, ptgt, qcap, q_vehicle)
    return status == 1


@njit(cache=True)
def scan_block(route, cost, block, pinit, ptgt, qcap, q_vehicle, require_improving):
    """Best feasible relocation of `block` consecutive visits.

    Returns (found, p, j, delta): block [p, p+block) goes right after the
    original slot j.  Moves creating adjacent visits to one station are
    skipped.  Candidates are tried in (delta, index) order, so the first
    feasible one is the best.
    """
    k = route.shape[0]
    if k - 2 < block + 1:
        return 0, -1, -1, np.int64(0)
    keys = np.empty((k - block) * (k - 1), np.int64)
    cnt = 0
    for p in range(1, k - block):
        if route[p - 1] == route[p + block]:
            continue
        gain = (cost[route[p - 1], route[p]] + cost[route[p + block - 1], route[p + block]]
                - cost[route[p - 1], route[p + block]])
        for j in range(0, k - 1):
            if p - 2 < j < p + block:
                continue
            if route[j] == route[p] or route[p + block - 1] == route[j + 1]:
                continue
            delta = (cost[route[j], route[p]] + cost[route[p + block - 1], route[j + 1]]
                     - cost[route[j], route[j + 1]] - gain)
            if require_improving and delta >= 0:
                continue
            keys[cnt] = delta * _ENC + p * (k - 1) + j
            cnt += 1
    if cnt == 0:
        return 0, -1, -1, np.int64(0)
    order = np.argsort(keys[:cnt])
    buf = np.empty(k, np.int64)
    for oi in range(cnt):
        key = keys[order[oi]]
        e = key & (_ENC - 1)
        delta = key >> 20
        p = e // (k - 1)
        j = e % (k - 1)
        jj = j if j < p else j - block
        t = 0
        ri = 0
        for x in range(k):
            if p <= x < p + block:
                continue
            buf[t] = route[x]
            t += 1
            if ri == jj:
                for b in range(block):
                    buf[t] = route[p + b]
                    t += 1
            ri += 1
        if _feasible(buf, pinit, ptgt, qcap, q_vehicle):
            return 1, p, j, delta
    return 0, -1, -1, np.int64(0)


@njit(cache=True)
def scan_two_opt(route, cost, pinit, ptgt, qcap, q_vehicle, require_improving):
    """Best feasible reversal of an internal subsequence: (found, a, b, delta)
    removes arcs (a, a+1) and (b, b+1) and reverses route[a+1..b]."""
    k = route.shape[0]
    if k < 5:
        return 0, -1, -1, np.int64(0)
    keys = np.empty((k - 3) * (k - 3), np.int64)
    cnt = 0
    for a in range(0, k - 3):
        for b in range(a + 2, k - 1):
            delta = (cost[route[a], route[b]] + cost[route[a + 1], route[b + 1]]
                     - cost[route[a], route[a + 1]] - cost[route[b], route[b + 1]])
            if require_improving and delta >= 0:
                continue
            keys[cnt] = delta * _ENC + a * k + b
            cnt += 1
    if cnt == 0:
        return 0, -1, -1, np.int64(0)
    order = np.argsort(keys[:cnt])
    buf = np.empty(k, np.int64)
    for oi in range(cnt):
        key = keys[order[oi]]
        e = key & (_ENC - 1)
        delta = key >> 20
        a = e // k
        b = e % k
        for x in range(k):
            buf[x] = route[x]
        lo, hi = a + 1, b
        while lo < hi:
            tmp = buf[lo]
            buf[lo] = buf[hi]
            buf[hi] = tmp
            lo += 1
            hi -= 1
        if _feasible(buf, pinit, ptgt, qcap, q_vehicle):
            return 1, a, b, delta
    return 0, -1, -1, np.int64(0)


@njit(cache=True)
def scan_swap(route, cost, pinit, ptgt, qcap, q_vehicle, require_improving):
    """Best feasible exchange of the visits at two positions."""
    k = route.shape[0]
    if k < 4:
        return 0, -1, -1, np.int64(0)
    keys = np.empty((k - 2) * (k - 2), np.int64)
    cnt = 0
    for p in range(1, k - 1):
        for q in range(p + 1, k - 1):
            if route[p] == route[q]:
                continue
            if q == p + 1:
                delta = (cost[route[p - 1], route[q]] + cost[route[q], route[p]]
                         + cost[route[p], route[q + 1]]
                         - cost[route[p - 1], route[p]] - cost[route[p], route[q]]
                         - cost[route[q], route[q + 1]])
            else:
                delta = (cost[route[p - 1], route[q]] + cost[route[q], route[p + 1]]
                         + cost[route[q - 1], route[p]] + cost[route[p], route[q + 1]]
                         - cost[route[p - 1], route[p]] - cost[route[p], route[p + 1]]
                         - cost[route[q - 1], route[q]] - cost[route[q], route[q + 1]])
            if require_improving and delta >= 0:
                continue
            keys[cnt] = delta * _ENC + p * k + q
            cnt += 1
    if cnt == 0:
        return 0, -1, -1, np.int64(0)
    order = np.argsort(keys[:cnt])
    buf = np.empty(k, np.int64)
    for oi in range(cnt):
        key = keys[order[oi]]
        e = key & (_ENC - 1)
        delta = key >> 20
        p = e // k
        q = e % k
        for x in range(k):
            buf[x] = route[x]
        tmp = buf[p]
        buf[p] = buf[q]
        buf[q] = tmp
        if _feasible(buf, pinit, ptgt, qcap, q_vehicle):
            return 1, p, q, delta
    return 0, -1, -1, np.int64(0)


@njit(cache=True)
def scan_suppression(route, cost, pinit, ptgt, qcap, q_vehicle, require_improving):
    """Best feasible removal of a zero-demand visit or a repeat visit."""
    k = route.shape[0]
    n1 = pinit.shape[0]
    counts = np.zeros(n1, np.int64)
    for pos in range(1, k - 1):
        counts[route[pos]] += 1
    keys = np.empty(k - 2, np.int64)
    cnt = 0
    for p in range(1, k - 1):
        s = route[p]
        if ptgt[s] != pinit[s] and counts[s] < 2:
            continue
        delta = cost[route[p - 1], route[p + 1]] - cost[route[p - 1], route[p]] - cost[route[p], route[p + 1]]
        if require_improving and delta >= 0:
            continue
        keys[cnt] = delta * _ENC + p
        cnt += 1
    if cnt == 0:
        return 0, -1, -1, np.int64(0)
    order = np.argsort(keys[:cnt])
    buf = np.empty(k - 1, np.int64)
    for oi in range(cnt):
        key = keys[order[oi]]
        p = key & (_ENC - 1)
        delta = key >> 20
        t = 0
        for x in range(k):
            if x != p:
                buf[t] = route[x]
                t += 1
        if _feasible(buf, pinit, ptgt, qcap, q_vehicle):
            return 1, p, -1, delta
    return 0, -1, -1, np.int64(0)
