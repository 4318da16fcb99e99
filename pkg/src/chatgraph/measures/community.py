"""Community structure: seeded greedy modularity maximization
(Louvain-style), Newman modularity, mesoscopic vertex roles and coreness.

Community detection runs on the unweighted undirected view and is fully
deterministic given (graph, seed): visiting order comes from a seeded
generator and ties prefer the smaller community id. Ids are relabeled
contiguous from 0 in order of first member vertex, so results are invariant
under renaming users (vertex indices are insertion-ordered upstream).

The role measures follow the participation/within-module-degree family and
its external extension: z-scores are taken within the vertex's community
with population standard deviation; zero variance or singleton communities
yield 0. Directional variants restrict the underlying degree counts to
incoming or outgoing edges while keeping the same partition.
"""

from __future__ import annotations

import numpy as np


def detect_communities(adj_sym_bin: np.ndarray, seed: int) -> np.ndarray:
    """Louvain-style partition of the unweighted undirected view.

    Returns an int array mapping vertex -> community id (contiguous from 0).
    """
    n = adj_sym_bin.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    w = adj_sym_bin.astype(np.float64)
    m2 = float(w.sum())
    if m2 == 0:
        return np.arange(n, dtype=np.int64)

    rng = np.random.default_rng(seed)
    # current level graph; node i of the level maps to a set of base vertices
    level_w = w
    membership = np.arange(n, dtype=np.int64)  # base vertex -> level node

    while True:
        ln = level_w.shape[0]
        comm = np.arange(ln, dtype=np.int64)
        strength = level_w.sum(axis=1)
        tot = strength.copy()  # per community total strength
        improved_any = False
        improved = True
        while improved:
            improved = False
            for v in rng.permutation(ln):
                cv = comm[v]
                # neighbor community weights
                nb = {}
                row = level_w[v]
                for u in np.nonzero(row)[0]:
                    if u == v:
                        continue
                    nb[comm[u]] = nb.get(comm[u], 0.0) + row[u]
                tot[cv] -= strength[v]
                base_gain = nb.get(cv, 0.0) - strength[v] * tot[cv] / m2
                best_c, best_gain = cv, base_gain
                for c, link in sorted(nb.items()):
                    if c == cv:
                        continue
                    gain = link - strength[v] * tot[c] / m2
                    if gain > best_gain + 1e-12:
                        best_gain = gain
                        best_c = c
                comm[v] = best_c
                tot[best_c] += strength[v]
                if best_c != cv:
                    improved = True
                    improved_any = True
        if not improved_any:
            break
        # aggregate communities into supervertices (intra weight becomes a
        # self-loop and rides along through every further level)
        ids = sorted(set(comm.tolist()))
        remap = {c: i for i, c in enumerate(ids)}
        nc = len(ids)
        onehot = np.zeros((ln, nc))
        for i in range(ln):
            onehot[i, remap[comm[i]]] = 1.0
        membership = np.array([remap[comm[membership[v]]] for v in range(n)],
                              dtype=np.int64)
        if nc == ln:
            break
        level_w = onehot.T @ level_w @ onehot

    # contiguous ids ordered by first member vertex
    remap2: dict[int, int] = {}
    out = np.empty(n, dtype=np.int64)
    for v in range(n):
        c = int(membership[v])
        if c not in remap2:
            remap2[c] = len(remap2)
        out[v] = remap2[c]
    return out


def community_count(partition: np.ndarray) -> int:
    if partition.size == 0:
        return 0
    return int(partition.max()) + 1


def modularity(adj_sym: np.ndarray, partition: np.ndarray) -> tuple[float, bool]:
    """Newman modularity Q of a partition on an undirected (possibly
    weighted) view; (0, flag) for an edgeless graph."""
    n = adj_sym.shape[0]
    if partition.shape[0] != n:
        raise ValueError("partition does not match vertex count")
    m2 = float(adj_sym.sum())
    if m2 == 0:
        return 0.0, True
    q = 0.0
    strength = adj_sym.sum(axis=1)
    for c in range(community_count(partition)):
        members = partition == c
        internal = float(adj_sym[np.ix_(members, members)].sum())
        dc = float(strength[members].sum())
        q += internal / m2 - (dc / m2) ** 2
    return q, False


def _zscore_within(values: np.ndarray, partition: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values, dtype=np.float64)
    for c in range(community_count(partition)):
        members = np.nonzero(partition == c)[0]
        if members.size < 2:
            continue
        vals = values[members]
        std = vals.std()
        if std > 1e-12:
            out[members] = (vals - vals.mean()) / std
    return out


def vertex_roles(adj_for_mode: np.ndarray, mode: str,
                 partition: np.ndarray) -> dict[str, np.ndarray]:
    """Role measures for every vertex under a direction mode.

    adj_for_mode: symmetric binary matrix for "undirected", the directed
    binary matrix for "in"/"out" (rows are outgoing edges).

    Returns vectors for within_module_degree, participation,
    external_intensity, diversity and heterogeneity.
    """
    n = adj_for_mode.shape[0]
    c_count = community_count(partition)
    if n == 0:
        z = np.zeros(0)
        return {k: z for k in ("within_module_degree", "participation",
                               "external_intensity", "diversity",
                               "heterogeneity")}
    m = adj_for_mode.T if mode == "in" else adj_for_mode
    onehot = np.zeros((n, c_count))
    onehot[np.arange(n), partition] = 1.0
    k_per_comm = m @ onehot  # K[v, s] = edges of v toward community s
    k_total = k_per_comm.sum(axis=1)
    k_internal = k_per_comm[np.arange(n), partition]
    k_external = k_total - k_internal

    participation = np.zeros(n)
    nz = k_total > 0
    participation[nz] = 1.0 - ((k_per_comm[nz] / k_total[nz, None]) ** 2).sum(axis=1)

    diversity = np.zeros(n)
    if c_count > 1:
        external_mask = k_per_comm > 0
        external_mask[np.arange(n), partition] = False
        diversity = external_mask.sum(axis=1) / (c_count - 1)

    heterogeneity_raw = np.zeros(n)
    if c_count > 1:
        for v in range(n):
            others = np.delete(k_per_comm[v], partition[v])
            heterogeneity_raw[v] = others.std()

    return {
        "within_module_degree": _zscore_within(k_internal, partition),
        "participation": participation,
        "external_intensity": _zscore_within(k_external, partition),
        "diversity": diversity,
        "heterogeneity": _zscore_within(heterogeneity_raw, partition),
    }


def coreness(adj_bin: np.ndarray, mode: str) -> np.ndarray:
    """Max k such that the vertex survives iterative removal of vertices
    with degree < k; degree follows the direction mode."""
    n = adj_bin.shape[0]
    core = np.zeros(n, dtype=np.int64)
    if n == 0:
        return core
    if mode == "undirected":
        deg = adj_bin.sum(axis=1).astype(np.int64)
    elif mode == "in":
        deg = adj_bin.sum(axis=0).astype(np.int64)
    else:
        deg = adj_bin.sum(axis=1).astype(np.int64)
    alive = np.ones(n, dtype=bool)
    k = 0
    remaining = n
    while remaining > 0:
        k = max(k, int(deg[alive].min()))
        queue = [v for v in range(n) if alive[v] and deg[v] <= k]
        while queue:
            v = queue.pop()
            if not alive[v]:
                continue
            alive[v] = False
            remaining -= 1
            core[v] = k
            # removing v lowers the mode-degree of the right neighbors
            if mode == "undirected":
                touched = np.nonzero(adj_bin[v])[0]
            elif mode == "in":
                touched = np.nonzero(adj_bin[v])[0]  # v's out-edges fed their in-degree
            else:
                touched = np.nonzero(adj_bin[:, v])[0]  # v's in-edges fed their out-degree
            for u in touched:
                if alive[u]:
                    deg[u] -= 1
                    if deg[u] <= k:
                        queue.append(int(u))
    return core
