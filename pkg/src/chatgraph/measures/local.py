"""Neighborhood-level measures: degree/strength, transitivity (local and
global, with the Barrat weighted local variant), Burt's constraint,
reciprocity, degree assortativity, density and basic counts.

Degenerate conventions follow the featurizer contract: undefined values
come back as 0 together with a flag where the caller needs one (vertices of
degree < 2 have local transitivity 0; isolates have Burt constraint 0;
zero-variance degree sequences have assortativity 0).
"""

from __future__ import annotations

import numpy as np


def degree_vector(adj_bin: np.ndarray, mode: str) -> np.ndarray:
    """Raw degrees under a direction mode.

    adj_bin is the binarized matrix of the owning view: symmetric for
    mode "undirected", the directed matrix for "in"/"out".
    """
    if mode == "in":
        return adj_bin.sum(axis=0)
    return adj_bin.sum(axis=1)


def degree_centrality(adj_bin: np.ndarray, mode: str) -> np.ndarray:
    """Degree normalized by n-1; 0 for a single-vertex graph."""
    n = adj_bin.shape[0]
    if n <= 1:
        return np.zeros(n)
    return degree_vector(adj_bin, mode) / (n - 1)


def strength_vector(adj_w: np.ndarray, mode: str) -> np.ndarray:
    if mode == "in":
        return adj_w.sum(axis=0)
    return adj_w.sum(axis=1)


def local_transitivity_unweighted(adj_sym_bin: np.ndarray) -> np.ndarray:
    """Fraction of closed neighbor pairs; degree < 2 gives 0."""
    b = adj_sym_bin
    n = b.shape[0]
    if n == 0:
        return np.zeros(0)
    k = b.sum(axis=1)
    paths = b @ b
    closed = (paths * b).sum(axis=1)  # 2 * triangles at v
    out = np.zeros(n)
    mask = k >= 2
    out[mask] = closed[mask] / (k[mask] * (k[mask] - 1))
    return out


def local_transitivity_barrat(adj_sym_w: np.ndarray) -> np.ndarray:
    """Barrat weighted clustering: sum over ordered neighbor pairs (u, w)
    closed by an edge of w_vu, normalized by s_v (k_v - 1)."""
    w = adj_sym_w
    n = w.shape[0]
    if n == 0:
        return np.zeros(0)
    b = (w > 0).astype(np.float64)
    k = b.sum(axis=1)
    s = w.sum(axis=1)
    num = (w * (b @ b)).sum(axis=1)
    out = np.zeros(n)
    mask = (k >= 2) & (s > 0)
    out[mask] = num[mask] / (s[mask] * (k[mask] - 1))
    return out


def global_transitivity(adj_sym_bin: np.ndarray) -> float:
    """3 * triangles / connected triples; 0 when no triples exist."""
    b = adj_sym_bin
    if b.shape[0] == 0:
        return 0.0
    k = b.sum(axis=1)
    triples2 = float((k * (k - 1)).sum())  # 2 * connected triples
    if triples2 == 0:
        return 0.0
    closed2 = float(np.trace(b @ b @ b))  # 6 * triangles
    return closed2 / triples2


def burts_constraint(adj_sym: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Burt's constraint per vertex on an undirected view.

    Returns (values, degenerate_mask); isolates are 0 and flagged.
    Proportions p_vj are edge weights normalized by the vertex strength,
    so the result is invariant under global weight rescaling.
    """
    w = adj_sym
    n = w.shape[0]
    out = np.zeros(n)
    s = w.sum(axis=1)
    degenerate = s <= 0
    if n == 0 or degenerate.all():
        return out, degenerate
    p = np.zeros_like(w)
    nz = ~degenerate
    p[nz] = w[nz] / s[nz, None]
    m = p + p @ p
    contrib = np.where(w > 0, m, 0.0) ** 2
    out = contrib.sum(axis=1)
    out[degenerate] = 0.0
    return out, degenerate


def reciprocity(adj_dir_bin: np.ndarray) -> tuple[float, bool]:
    """Fraction of directed edges whose reverse exists; (0, flag) if empty."""
    b = adj_dir_bin
    m = float(b.sum())
    if m == 0:
        return 0.0, True
    return float((b * b.T).sum() / m), False


def _pearson(x: np.ndarray, y: np.ndarray) -> tuple[float, bool]:
    vx = x.var()
    vy = y.var()
    if vx < 1e-18 or vy < 1e-18:
        return 0.0, True
    r = float(((x - x.mean()) * (y - y.mean())).mean() / np.sqrt(vx * vy))
    return max(-1.0, min(1.0, r)), False


def assortativity(adj_bin: np.ndarray, directed: bool) -> tuple[float, bool]:
    """Pearson correlation of endpoint degrees over edges.

    Undirected: both orientations of every edge enter the correlation.
    Directed: pairs are (out-degree of source, in-degree of target).
    Constant degree sequences are degenerate: (0, flag).
    """
    b = adj_bin
    if directed:
        src, dst = np.nonzero(b)
        if src.size == 0:
            return 0.0, True
        kout = b.sum(axis=1)
        kin = b.sum(axis=0)
        return _pearson(kout[src], kin[dst])
    src, dst = np.nonzero(b)  # symmetric matrix lists both orientations
    if src.size == 0:
        return 0.0, True
    k = b.sum(axis=1)
    return _pearson(k[src], k[dst])


def basic_stats(n: int, edge_count: int, directed: bool) -> dict:
    possible = n * (n - 1) if directed else n * (n - 1) / 2
    density = edge_count / possible if possible > 0 else 0.0
    return {"vertex_count": float(n), "edge_count": float(edge_count),
            "density": float(density)}
