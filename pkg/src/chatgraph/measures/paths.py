"""Shortest-path based measures: closeness, eccentricity, betweenness,
diameter/radius/average distance.

All functions consume dense adjacency matrices of a graph view (symmetric
for undirected views). Weighted traversal cost defaults to 1/weight, the
strength-as-proximity reading; raw weights as cost are available via the
`reciprocal_cost=False` switch threaded through by the measure config.

Unreachable pairs are excluded everywhere; a vertex with no reachable
partner contributes the degenerate value 0.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from . import _kernels


def cost_matrix(adj: np.ndarray, weighted: bool,
                reciprocal_cost: bool = True) -> np.ndarray:
    """Per-edge traversal costs aligned with adj's nonzero structure."""
    if not weighted:
        return (adj > 0).astype(np.float64)
    cost = np.zeros_like(adj)
    mask = adj > 0
    cost[mask] = 1.0 / adj[mask] if reciprocal_cost else adj[mask]
    return cost


def apsp(adj: np.ndarray, weighted: bool,
         reciprocal_cost: bool = True) -> np.ndarray:
    """All-pairs shortest-path distances; inf where unreachable."""
    n = adj.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    cost = cost_matrix(adj, weighted, reciprocal_cost)
    sparse = csr_matrix(cost)
    if weighted:
        return shortest_path(sparse, method="D", directed=True)
    return shortest_path(sparse, method="D", directed=True, unweighted=True)


def closeness_from_table(dist: np.ndarray, mode: str) -> np.ndarray:
    """Closeness (r-1)/sum(d) over reachable vertices.

    mode: "out" (or "undirected") uses rows, distances from v;
    "in" uses columns, distances to v.
    """
    d = dist if mode != "in" else dist.T
    n = d.shape[0]
    out = np.zeros(n)
    for v in range(n):
        row = d[v]
        finite = np.isfinite(row)
        finite[v] = False
        r = int(finite.sum())
        if r > 0:
            out[v] = r / row[finite].sum()
    return out


def eccentricity_from_table(dist: np.ndarray, mode: str) -> np.ndarray:
    """Max distance to a reachable vertex; 0 when nothing is reachable."""
    d = dist if mode != "in" else dist.T
    n = d.shape[0]
    out = np.zeros(n)
    for v in range(n):
        row = d[v].copy()
        row[v] = np.inf
        finite = np.isfinite(row)
        if finite.any():
            out[v] = row[finite].max()
    return out


def diameter(dist: np.ndarray) -> tuple[float, bool]:
    """(value, degenerate flag); max over reachable ordered pairs."""
    n = dist.shape[0]
    if n == 0:
        return 0.0, True
    off = dist[~np.eye(n, dtype=bool)]
    finite = off[np.isfinite(off)]
    if finite.size == 0:
        return 0.0, True
    return float(finite.max()), False


def radius(dist: np.ndarray, mode: str) -> tuple[float, bool]:
    """Min eccentricity over vertices that reach at least one vertex."""
    ecc = eccentricity_from_table(dist, mode)
    d = dist if mode != "in" else dist.T
    n = d.shape[0]
    has_partner = np.zeros(n, dtype=bool)
    for v in range(n):
        row = d[v].copy()
        row[v] = np.inf
        has_partner[v] = np.isfinite(row).any()
    if not has_partner.any():
        return 0.0, True
    return float(ecc[has_partner].min()), False


def average_distance(dist: np.ndarray) -> tuple[float, bool]:
    """Mean shortest-path length over reachable ordered pairs."""
    n = dist.shape[0]
    if n == 0:
        return 0.0, True
    off = dist[~np.eye(n, dtype=bool)]
    finite = off[np.isfinite(off)]
    if finite.size == 0:
        return 0.0, True
    return float(finite.mean()), False


def betweenness(adj: np.ndarray, weighted: bool, directed: bool,
                reciprocal_cost: bool = True) -> np.ndarray:
    """Brandes betweenness, fractional credit for tied geodesics.

    Directed counts ordered source/target pairs; undirected counts each
    unordered pair once (adj must then be symmetric).
    """
    n = adj.shape[0]
    if n == 0:
        return np.zeros(0)
    cost = cost_matrix(adj, weighted, reciprocal_cost)
    sparse = csr_matrix(cost)
    indptr = sparse.indptr.astype(np.int64)
    indices = sparse.indices.astype(np.int64)
    if weighted:
        bc = _kernels.brandes_weighted(indptr, indices,
                                       sparse.data.astype(np.float64), n)
    else:
        bc = _kernels.brandes_unweighted(indptr, indices, n)
    if not directed:
        bc = bc / 2.0
    return bc
