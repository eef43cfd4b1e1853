"""Compiled inner loops.

Randomness inside the kernels is counter based: every (seed, domain, a, b)
tuple maps to a 64-bit stream key, and the uniform attached to counter ``c`` of that stream
is ``splitmix64(key + (c + 1) * GOLDEN)``.  Cascades and RR sets index the
counter by arc position, so each arc has one fixed uniform per stream.  That
makes a simulation a pure function of its stream (no draw-order dependence) and
couples runs that share a stream across different probability vectors.
"""

import heapq

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_SALT = np.uint64(0xD1B54A32D192ED03)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0

# domains keep cascade and RR-set streams disjoint under a shared seed
CASCADE = 1
RR = 2


@njit(cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True)
def stream_key(seed, domain, a, b):
    k = mix64(np.uint64(seed) ^ _SALT)
    k = mix64(k + np.uint64(domain) * GOLDEN)
    k = mix64(k + np.uint64(a) * GOLDEN)
    return mix64(k + np.uint64(b) * _SALT)


@njit(cache=True, inline="always")
def uniform(key, counter):
    return (mix64(key + (np.uint64(counter) + np.uint64(1)) * GOLDEN) >> _S11) * _INV53


# ---------------------------------------------------------------- cascades


@njit(cache=True)
def _spread(indptr, indices, p, seeds, key, mark, stamp, queue):
    size = 0
    for s in seeds:
        if mark[s] != stamp:
            mark[s] = stamp
            queue[size] = s
            size += 1
    rounds = 0
    lo = 0
    hi = size
    while lo < hi:
        for q in range(lo, hi):
            u = queue[q]
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if mark[v] != stamp and uniform(key, k) < p[k]:
                    mark[v] = stamp
                    queue[size] = v
                    size += 1
        if size > hi:
            rounds += 1
        lo = hi
        hi = size
    return size, rounds


@njit(cache=True)
def simulate(indptr, indices, p, seeds, seed, stream, run):
    n = indptr.shape[0] - 1
    mark = np.zeros(n, np.int64)
    queue = np.empty(n, np.int64)
    key = stream_key(seed, CASCADE, stream, run)
    size, rounds = _spread(indptr, indices, p, seeds, key, mark, 1, queue)
    return queue[:size].copy(), rounds


@njit(cache=True)
def spread_runs(indptr, indices, p, seeds, seed, stream, runs):
    """Final cascade sizes of ``runs`` independent runs, substreams (seed, stream, run)."""
    n = indptr.shape[0] - 1
    mark = np.zeros(n, np.int64)
    queue = np.empty(n, np.int64)
    sizes = np.empty(runs, np.int64)
    for r in range(runs):
        key = stream_key(seed, CASCADE, stream, r)
        sizes[r], _ = _spread(indptr, indices, p, seeds, key, mark, r + 1, queue)
    return sizes


@njit(cache=True)
def node_capacity(indptr, indices, p, seed, runs, denom):
    n = indptr.shape[0] - 1
    mean = np.empty(n)
    std = np.empty(n)
    mark = np.zeros(n, np.int64)
    queue = np.empty(n, np.int64)
    one = np.empty(1, np.int64)
    stamp = 0
    for i in range(n):
        one[0] = i
        m = 0.0
        m2 = 0.0
        for r in range(runs):
            stamp += 1
            key = stream_key(seed, CASCADE, i, r)
            size, _ = _spread(indptr, indices, p, one, key, mark, stamp, queue)
            x = size / denom
            d = x - m
            m += d / (r + 1)
            m2 += d * (x - m)
        mean[i] = m
        std[i] = np.sqrt(m2 / (runs - 1)) if runs > 1 else 0.0
    return mean, std


# ---------------------------------------------------------------- RR sets


@njit(cache=True)
def rr_sets(indptr, indices, rev, p, seed, phase, start, count):
    """Sample ``count`` RR sets on substreams (seed, phase, start..start+count-1).

    Returns (offsets, members, roots, widths); widths hold the number of arcs
    entering each set, which the KPT estimator needs.
    """
    n = indptr.shape[0] - 1
    n_arcs = indices.shape[0]
    offsets = np.empty(count + 1, np.int64)
    roots = np.empty(count, np.int64)
    widths = np.empty(count, np.int64)
    cap = max(64, 4 * count)
    buf = np.empty(cap, np.int32)
    mark = np.zeros(n, np.int64)
    queue = np.empty(n, np.int64)
    total = 0
    offsets[0] = 0
    for t in range(count):
        key = stream_key(seed, RR, start + t, phase)
        root = int(uniform(key, n_arcs) * n)
        if root >= n:
            root = n - 1
        roots[t] = root
        stamp = t + 1
        mark[root] = stamp
        queue[0] = root
        size = 1
        head = 0
        width = 0
        while head < size:
            v = queue[head]
            head += 1
            width += indptr[v + 1] - indptr[v]
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if mark[u] == stamp:
                    continue
                arc = rev[k]  # position of u -> v
                if uniform(key, arc) < p[arc]:
                    mark[u] = stamp
                    queue[size] = u
                    size += 1
        widths[t] = width
        if total + size > cap:
            while total + size > cap:
                cap *= 2
            grown = np.empty(cap, np.int32)
            grown[:total] = buf[:total]
            buf = grown
        for q in range(size):
            buf[total + q] = queue[q]
        total += size
        offsets[t + 1] = total
    return offsets, buf[:total].copy(), roots, widths


@njit(cache=True)
def greedy_cover(offsets, members, n, k):
    theta = offsets.shape[0] - 1
    count = np.zeros(n, np.int64)
    for x in members:
        count[x] += 1
    ptr = np.zeros(n + 1, np.int64)
    for v in range(n):
        ptr[v + 1] = ptr[v] + count[v]
    fill = ptr[:-1].copy()
    sets_of = np.empty(members.shape[0], np.int32)
    for s in range(theta):
        for q in range(offsets[s], offsets[s + 1]):
            v = members[q]
            sets_of[fill[v]] = s
            fill[v] += 1
    covered = np.zeros(theta, np.bool_)
    seeds = np.empty(k, np.int64)
    cum = np.empty(k, np.int64)
    n_cov = 0
    for it in range(k):
        best = np.argmax(count)
        seeds[it] = best
        for q in range(ptr[best], ptr[best + 1]):
            s = sets_of[q]
            if covered[s]:
                continue
            covered[s] = True
            n_cov += 1
            for r in range(offsets[s], offsets[s + 1]):
                count[members[r]] -= 1
        count[best] = -1
        cum[it] = n_cov
    return seeds, cum


# ---------------------------------------------------------------- shortest paths


@njit(cache=True)
def bfs_sweep(indptr, indices):
    """Per node: sum of hop distances, eccentricity, reached-node count."""
    n = indptr.shape[0] - 1
    total = np.zeros(n, np.int64)
    ecc = np.zeros(n, np.int64)
    reached = np.zeros(n, np.int64)
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    for s in range(n):
        dist[:] = -1
        dist[s] = 0
        queue[0] = s
        size = 1
        head = 0
        while head < size:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue[size] = v
                    size += 1
        acc = 0
        for q in range(size):
            acc += dist[queue[q]]
        total[s] = acc
        ecc[s] = dist[queue[size - 1]]
        reached[s] = size
    return total, ecc, reached


@njit(cache=True)
def _dijkstra(indptr, indices, w, s, dist, order, tol):
    """Settle nodes from ``s``; fills dist (inf if unreached) and settle order."""
    n = indptr.shape[0] - 1
    dist[:] = np.inf
    done = np.zeros(n, np.bool_)
    dist[s] = 0.0
    heap = [(0.0, s)]
    size = 0
    while len(heap) > 0:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        order[size] = u
        size += 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if done[v]:
                continue
            nd = d + w[k]
            if nd < dist[v] - tol * max(nd, 1e-300):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return size


@njit(cache=True)
def dijkstra_sums(indptr, indices, w):
    n = indptr.shape[0] - 1
    sums = np.zeros(n)
    reached = np.zeros(n, np.int64)
    dist = np.empty(n)
    order = np.empty(n, np.int64)
    for s in range(n):
        size = _dijkstra(indptr, indices, w, s, dist, order, 0.0)
        # settle order is ascending distance, so equal distance multisets
        # give bit-identical sums
        acc = 0.0
        for t in range(size):
            acc += dist[order[t]]
        sums[s] = acc
        reached[s] = size
    return sums, reached


@njit(cache=True)
def brandes(indptr, indices, rev, w, weighted, tol):
    """Ordered-pair betweenness sums (halve for undirected pair counts).

    With ``weighted`` false, ``w`` is ignored and BFS layers define paths.
    Predecessors are recovered from final distances: v precedes x when v was
    settled first and dist[v] + w(v -> x) equals dist[x] within ``tol``.
    """
    n = indptr.shape[0] - 1
    bc = np.zeros(n)
    dist = np.empty(n)
    order = np.empty(n, np.int64)
    pos = np.empty(n, np.int64)
    sigma = np.zeros(n)
    delta = np.zeros(n)
    for s in range(n):
        if weighted:
            size = _dijkstra(indptr, indices, w, s, dist, order, tol)
        else:
            dist[:] = np.inf
            dist[s] = 0.0
            order[0] = s
            size = 1
            head = 0
            while head < size:
                u = order[head]
                head += 1
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if dist[v] == np.inf:
                        dist[v] = dist[u] + 1.0
                        order[size] = v
                        size += 1
        for q in range(size):
            pos[order[q]] = q
            sigma[order[q]] = 0.0
            delta[order[q]] = 0.0
        sigma[s] = 1.0
        for q in range(1, size):
            x = order[q]
            acc = 0.0
            for k in range(indptr[x], indptr[x + 1]):
                v = indices[k]
                if dist[v] == np.inf or pos[v] >= q:
                    continue
                wv = w[rev[k]] if weighted else 1.0
                if abs(dist[v] + wv - dist[x]) <= tol * max(dist[x], 1e-300):
                    acc += sigma[v]
            sigma[x] = acc
        for q in range(size - 1, 0, -1):
            x = order[q]
            coeff = (1.0 + delta[x]) / sigma[x]
            for k in range(indptr[x], indptr[x + 1]):
                v = indices[k]
                if dist[v] == np.inf or pos[v] >= q:
                    continue
                wv = w[rev[k]] if weighted else 1.0
                if abs(dist[v] + wv - dist[x]) <= tol * max(dist[x], 1e-300):
                    delta[v] += sigma[v] * coeff
            bc[x] += delta[x]
        for q in range(size):
            dist[order[q]] = np.inf
    return bc
