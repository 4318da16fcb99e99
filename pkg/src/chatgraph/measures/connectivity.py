"""Connectivity-flavored measures: weak/strong components, articulation
points, vertex connectivity (cohesion), edge connectivity (adhesion) and
maximal clique counts.

Cohesion/adhesion run unit-capacity max-flow (Dinic kernel) over a reduced
family of source/sink pairs around a minimum-degree vertex; for a directed
graph that is not strongly connected (or an undirected one that is not
connected) both are 0 by definition. Complete graphs get the conventional
n-1 without any flow calls.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels


def component_counts(adj_dir_bin: np.ndarray, directed: bool) -> dict:
    """Weak and strong component counts.

    For an undirected graph the two coincide.
    """
    n = adj_dir_bin.shape[0]
    if n == 0:
        return {"weak": 0, "strong": 0}
    sparse = csr_matrix(adj_dir_bin)
    weak = connected_components(sparse, directed=directed,
                                connection="weak", return_labels=False)
    if directed:
        strong = connected_components(sparse, directed=True,
                                      connection="strong",
                                      return_labels=False)
    else:
        strong = weak
    return {"weak": int(weak), "strong": int(strong)}


def articulation_points(adj_sym_bin: np.ndarray) -> np.ndarray:
    """0/1 vector marking cut vertices of the undirected view (Tarjan)."""
    b = adj_sym_bin
    n = b.shape[0]
    marks = np.zeros(n, dtype=np.int64)
    if n == 0:
        return marks
    neighbors = [np.nonzero(b[v])[0] for v in range(n)]
    disc = [-1] * n
    low = [0] * n
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        # iterative DFS; stack holds (vertex, parent, neighbor cursor)
        stack = [(root, -1, 0)]
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        while stack:
            v, parent, ci = stack[-1]
            if ci < len(neighbors[v]):
                stack[-1] = (v, parent, ci + 1)
                w = int(neighbors[v][ci])
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, v, 0))
                elif w != parent:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[v])
                    if p != root and low[v] >= disc[p]:
                        marks[p] = 1
        if root_children >= 2:
            marks[root] = 1
    return marks


class _FlowNetwork:
    """Paired-arc residual network feeding the Dinic kernel."""

    def __init__(self, n_nodes: int, arcs: list[tuple[int, int, int]]):
        self.n_nodes = n_nodes
        m = len(arcs)
        self.arc_to = np.empty(2 * m, dtype=np.int64)
        self.cap0 = np.empty(2 * m, dtype=np.int64)
        out: list[list[int]] = [[] for _ in range(n_nodes)]
        for e, (u, v, c) in enumerate(arcs):
            self.arc_to[2 * e] = v
            self.cap0[2 * e] = c
            self.arc_to[2 * e + 1] = u
            self.cap0[2 * e + 1] = 0
            out[u].append(2 * e)
            out[v].append(2 * e + 1)
        self.indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        for i, lst in enumerate(out):
            self.indptr[i + 1] = self.indptr[i] + len(lst)
        self.arcs_flat = np.empty(self.indptr[-1], dtype=np.int64)
        pos = 0
        for lst in out:
            for a in lst:
                self.arcs_flat[pos] = a
                pos += 1

    def maxflow(self, s: int, t: int) -> int:
        return int(_kernels.dinic(self.indptr, self.arcs_flat, self.arc_to,
                                  self.cap0, self.n_nodes, s, t))


def _as_arc_pairs(adj_bin: np.ndarray, directed: bool) -> list[tuple[int, int]]:
    src, dst = np.nonzero(adj_bin)
    if directed:
        return list(zip(src.tolist(), dst.tolist()))
    return [(int(u), int(v)) for u, v in zip(src, dst)]  # symmetric input


def edge_connectivity(adj_bin: np.ndarray, directed: bool) -> int:
    """Adhesion: minimum edges whose removal breaks (strong) connectivity."""
    n = adj_bin.shape[0]
    if n <= 1:
        return 0
    counts = component_counts(adj_bin, directed)
    if (counts["strong"] if directed else counts["weak"]) != 1:
        return 0
    edges = _as_arc_pairs(adj_bin, directed)
    net = _FlowNetwork(n, [(u, v, 1) for u, v in edges])
    best = n * n
    for v in range(1, n):
        best = min(best, net.maxflow(0, v), net.maxflow(v, 0))
        if best <= 1:
            return best
    return best


def vertex_connectivity(adj_bin: np.ndarray, directed: bool) -> int:
    """Cohesion: minimum vertices whose removal breaks (strong)
    connectivity; n-1 for complete graphs, 0 when already disconnected.

    Uses the neighborhood reduction around a minimum-degree vertex x:
    kappa = min over kappa(x, w) for non-successors w, kappa(w, x) for
    non-predecessors, and kappa(p, q) for p an in-neighbor and q an
    out-neighbor of x with no p->q edge. Every minimum cut either misses x
    (first two families) or contains it (third family).
    """
    n = adj_bin.shape[0]
    if n <= 1:
        return 0
    b = adj_bin > 0
    counts = component_counts(adj_bin, directed)
    if (counts["strong"] if directed else counts["weak"]) != 1:
        return 0
    offdiag = ~np.eye(n, dtype=bool)
    if (b | ~offdiag).all():
        return n - 1  # complete

    # split network: v_in = v, v_out = v + n; intra arc cap 1, edges cap n
    arcs = [(v, v + n, 1) for v in range(n)]
    src, dst = np.nonzero(b)
    arcs += [(int(u) + n, int(v), n) for u, v in zip(src, dst)]
    net = _FlowNetwork(2 * n, arcs)

    deg = b.sum(axis=1) + b.sum(axis=0)
    x = int(np.argmin(deg))
    best = n - 1

    def kappa(s: int, t: int) -> int:
        return net.maxflow(s + n, t)

    for w in range(n):
        if w != x and not b[x, w]:
            best = min(best, kappa(x, w))
            if best <= 1:
                return best
        if w != x and not b[w, x]:
            best = min(best, kappa(w, x))
            if best <= 1:
                return best
    preds = np.nonzero(b[:, x])[0]
    succs = np.nonzero(b[x])[0]
    for p in preds:
        for q in succs:
            if p != q and not b[p, q]:
                best = min(best, kappa(int(p), int(q)))
                if best <= 1:
                    return best
    return best


def count_maximal_cliques(adj_sym_bin: np.ndarray, bound: int = 512) -> int:
    """Number of maximal cliques of size >= 2 (pivoted Bron-Kerbosch).

    Raises:
        ValueError: more than `bound` vertices (combinatorial guard).
    """
    n = adj_sym_bin.shape[0]
    if n > bound:
        raise ValueError(
            f"clique counting limited to {bound} vertices, got {n}")
    if n == 0:
        return 0
    masks = [0] * n
    for v in range(n):
        row = np.nonzero(adj_sym_bin[v])[0]
        m = 0
        for w in row:
            m |= 1 << int(w)
        masks[v] = m
    count = 0

    def expand(size: int, p: int, xset: int) -> None:
        nonlocal count
        if p == 0 and xset == 0:
            if size >= 2:
                count += 1
            return
        # pivot with most candidates eliminated
        both = p | xset
        best_u, best_cover = -1, -1
        probe = both
        while probe:
            u = (probe & -probe).bit_length() - 1
            probe &= probe - 1
            cover = bin(p & masks[u]).count("1")
            if cover > best_cover:
                best_cover = cover
                best_u = u
        cand = p & ~masks[best_u]
        while cand:
            bit = cand & -cand
            v = bit.bit_length() - 1
            expand(size + 1, p & masks[v], xset & masks[v])
            p &= ~bit
            xset |= bit
            cand &= cand - 1

    expand(0, (1 << n) - 1, 0)
    return count
