"""Hot per-graph numeric kernels.

Single-source implementations written in the numba-compilable subset of
Python/numpy; when numba is available they are JIT-compiled with an on-disk
cache, otherwise the plain-Python versions run as-is (slow but identical).

Kernels:
  * Brandes betweenness, BFS (unweighted) and Dijkstra (weighted) variants,
    returning raw ordered-pair path counts for every vertex;
  * Dinic max-flow on integer-capacity arc-pair networks (used for vertex
    and edge connectivity);
  * shifted power iteration, HITS iteration, linear fixed-point iteration
    and PageRank iteration on small dense matrices.

Graph inputs use CSR arrays (indptr/indices[/costs]); flow networks use
paired arcs where arc 2k and 2k+1 are mutual reverses.
"""

from __future__ import annotations

import numpy as np


def _brandes_unweighted(indptr, indices, n):
    bc = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    for s in range(n):
        for i in range(n):
            dist[i] = -1
            sigma[i] = 0.0
            delta[i] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for idx in range(tail - 1, 0, -1):
            v = order[idx]
            dv = dist[v]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] == dv + 1 and sigma[w] > 0:
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            bc[v] += delta[v]
    return bc


def _brandes_weighted(indptr, indices, cost, n):
    bc = np.zeros(n, dtype=np.float64)
    dist = np.empty(n, dtype=np.float64)
    sigma = np.empty(n, dtype=np.float64)
    delta = np.empty(n, dtype=np.float64)
    done = np.empty(n, dtype=np.uint8)
    order = np.empty(n, dtype=np.int64)
    m = indptr[n]
    heap_d = np.empty(m + n + 2, dtype=np.float64)
    heap_v = np.empty(m + n + 2, dtype=np.int64)
    inf = np.inf
    for s in range(n):
        for i in range(n):
            dist[i] = inf
            sigma[i] = 0.0
            delta[i] = 0.0
            done[i] = 0
        dist[s] = 0.0
        sigma[s] = 1.0
        heap_d[0] = 0.0
        heap_v[0] = s
        size = 1
        n_done = 0
        while size > 0:
            # pop min
            d0 = heap_d[0]
            v = heap_v[0]
            size -= 1
            heap_d[0] = heap_d[size]
            heap_v[0] = heap_v[size]
            i = 0
            while True:
                l = 2 * i + 1
                r = l + 1
                small = i
                if l < size and heap_d[l] < heap_d[small]:
                    small = l
                if r < size and heap_d[r] < heap_d[small]:
                    small = r
                if small == i:
                    break
                heap_d[i], heap_d[small] = heap_d[small], heap_d[i]
                heap_v[i], heap_v[small] = heap_v[small], heap_v[i]
                i = small
            if done[v]:
                continue
            done[v] = 1
            order[n_done] = v
            n_done += 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if done[w]:
                    continue
                nd = d0 + cost[k]
                if nd < dist[w]:
                    dist[w] = nd
                    sigma[w] = sigma[v]
                    # push
                    j = size
                    heap_d[j] = nd
                    heap_v[j] = w
                    size += 1
                    while j > 0:
                        p = (j - 1) // 2
                        if heap_d[p] <= heap_d[j]:
                            break
                        heap_d[p], heap_d[j] = heap_d[j], heap_d[p]
                        heap_v[p], heap_v[j] = heap_v[j], heap_v[p]
                        j = p
                elif nd == dist[w]:
                    sigma[w] += sigma[v]
        for idx in range(n_done - 1, 0, -1):
            v = order[idx]
            dv = dist[v]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] == dv + cost[k] and sigma[w] > 0:
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            bc[v] += delta[v]
    return bc


def _dinic(adj_indptr, adj_arcs, arc_to, arc_cap0, n_nodes, s, t):
    cap = arc_cap0.copy()
    level = np.empty(n_nodes, dtype=np.int64)
    it = np.empty(n_nodes, dtype=np.int64)
    queue = np.empty(n_nodes, dtype=np.int64)
    stack_v = np.empty(n_nodes + 1, dtype=np.int64)
    stack_a = np.empty(n_nodes + 1, dtype=np.int64)
    total = 0
    while True:
        # BFS levels
        for i in range(n_nodes):
            level[i] = -1
        level[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(adj_indptr[v], adj_indptr[v + 1]):
                a = adj_arcs[k]
                w = arc_to[a]
                if cap[a] > 0 and level[w] < 0:
                    level[w] = level[v] + 1
                    queue[tail] = w
                    tail += 1
        if level[t] < 0:
            return total
        for i in range(n_nodes):
            it[i] = adj_indptr[i]
        # blocking flow via iterative DFS
        while True:
            # find augmenting path s -> t following level+1 arcs
            depth = 0
            stack_v[0] = s
            found = False
            while depth >= 0:
                v = stack_v[depth]
                if v == t:
                    found = True
                    break
                advanced = False
                while it[v] < adj_indptr[v + 1]:
                    a = adj_arcs[it[v]]
                    w = arc_to[a]
                    if cap[a] > 0 and level[w] == level[v] + 1:
                        stack_a[depth] = a
                        depth += 1
                        stack_v[depth] = w
                        advanced = True
                        break
                    it[v] += 1
                if advanced:
                    continue
                level[v] = -1  # dead end
                depth -= 1
            if not found:
                break
            # bottleneck
            bott = cap[stack_a[0]]
            for i in range(1, depth):
                if cap[stack_a[i]] < bott:
                    bott = cap[stack_a[i]]
            for i in range(depth):
                a = stack_a[i]
                cap[a] -= bott
                cap[a ^ 1] += bott
            total += bott
    return total


def _fixed_point(m, c, x0, tol, maxit):
    """x <- m @ x + c; returns (x, iters); iters == maxit+1 on failure."""
    n = m.shape[0]
    x = x0.copy()
    y = np.empty(n, dtype=np.float64)
    for it_count in range(1, maxit + 1):
        for i in range(n):
            acc = c[i]
            for j in range(n):
                acc += m[i, j] * x[j]
            y[i] = acc
        diff = 0.0
        for i in range(n):
            d = y[i] - x[i]
            if d < 0:
                d = -d
            if d > diff:
                diff = d
            x[i] = y[i]
        if diff < tol:
            return x, it_count
    return x, maxit + 1


def _pagerank(p, dangling, d, tol, maxit):
    """PageRank on row-normalized transition matrix p (dangling rows zero).

    dangling is a 0/1 vector; returns (x, iters); iters == maxit+1 on
    failure. x sums to 1.
    """
    n = p.shape[0]
    x = np.full(n, 1.0 / n, dtype=np.float64)
    y = np.empty(n, dtype=np.float64)
    base = (1.0 - d) / n
    for it_count in range(1, maxit + 1):
        dm = 0.0
        for i in range(n):
            if dangling[i] > 0:
                dm += x[i]
        dm = d * dm / n
        for j in range(n):
            acc = 0.0
            for i in range(n):
                acc += p[i, j] * x[i]
            y[j] = d * acc + dm + base
        diff = 0.0
        for j in range(n):
            dd = y[j] - x[j]
            if dd < 0:
                dd = -dd
            if dd > diff:
                diff = dd
            x[j] = y[j]
        if diff < tol:
            s = 0.0
            for j in range(n):
                s += x[j]
            if s > 0:
                for j in range(n):
                    x[j] /= s
            return x, it_count
    return x, maxit + 1


try:  # pragma: no cover - exercised implicitly everywhere
    from numba import njit

    brandes_unweighted = njit(cache=True)(_brandes_unweighted)
    brandes_weighted = njit(cache=True)(_brandes_weighted)
    dinic = njit(cache=True)(_dinic)
    fixed_point = njit(cache=True)(_fixed_point)
    pagerank_iterate = njit(cache=True)(_pagerank)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    brandes_unweighted = _brandes_unweighted
    brandes_weighted = _brandes_weighted
    dinic = _dinic
    fixed_point = _fixed_point
    pagerank_iterate = _pagerank
    HAVE_NUMBA = False
