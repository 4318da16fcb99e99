"""Shared test helpers: tiny corpus builders and random-graph generators."""

from __future__ import annotations

import numpy as np

from chatgraph.corpus import Corpus, Message
from chatgraph.graph import ConversationalGraph


def make_corpus(rows, declared_users=()):
    """Build a Corpus from (channel, author, text[, label]) rows.

    Rows are in global order; ids are m0, m1, ...; seq numbers are
    assigned per channel in row order.  Label defaults to "U".
    """
    channels: dict[str, list[Message]] = {}
    seq_counter: dict[str, int] = {}
    for i, row in enumerate(rows):
        channel, author, text = row[:3]
        label = row[3] if len(row) > 3 else "U"
        seq = seq_counter.get(channel, 0)
        seq_counter[channel] = seq + 1
        channels.setdefault(channel, []).append(
            Message(id=f"m{i}", channel=channel, seq=seq, author=author,
                    label=label, text=text))
    users = frozenset(r[1] for r in rows) | frozenset(declared_users)
    return Corpus(channels=channels, users=users)


def graph_from_edges(edges, directed=True, vertices=()):
    """ConversationalGraph from (u, v, w) triples; extra isolated vertices
    may be listed in `vertices`."""
    g = ConversationalGraph(directed=directed)
    for v in vertices:
        g.add_vertex(v)
    for u, v, w in edges:
        g.add_weight(u, v, w)
    return g.freeze()


def random_graph(rng: np.random.Generator, n_max=7, directed=None,
                 weight_style="mixed", ensure_edge=False):
    """Random small graph for oracle suites.

    weight_style: "unit" (all 1), "integer_reciprocal" (1/k for small k,
    giving exact integer path costs), "continuous", or "mixed".
    """
    n = int(rng.integers(1, n_max + 1))
    if directed is None:
        directed = bool(rng.integers(0, 2))
    names = [f"v{i}" for i in range(n)]
    g = ConversationalGraph(directed=directed)
    for name in names:
        g.add_vertex(name)
    p = rng.uniform(0.2, 0.9)
    style = weight_style
    if style == "mixed":
        style = ["unit", "integer_reciprocal", "continuous"][int(rng.integers(0, 3))]
    pairs = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if not directed and i > j:
                continue
            pairs.append((i, j))
    added = 0
    for i, j in pairs:
        if rng.random() < p:
            if style == "unit":
                w = 1.0
            elif style == "integer_reciprocal":
                w = 1.0 / int(rng.integers(1, 6))
            else:
                w = float(rng.uniform(0.2, 3.0))
            g.add_weight(names[i], names[j], w)
            added += 1
    if ensure_edge and added == 0 and n >= 2:
        g.add_weight(names[0], names[1], 1.0)
    return g.freeze()


def dense_views(g: ConversationalGraph):
    """(weighted, weighted symmetric, binary, binary symmetric) matrices.

    For an undirected graph the first two coincide, as do the last two.
    """
    w = g.weighted_matrix()
    wsym = w + w.T if g.directed else w
    b = (w > 0).astype(np.float64)
    bsym = (wsym > 0).astype(np.float64)
    return w, wsym, b, bsym


def random_strongly_connected(rng: np.random.Generator, n_max=20,
                              weighted=True) -> ConversationalGraph:
    """Directed graph containing a random Hamiltonian cycle plus extras,
    so every vertex reaches every other."""
    n = int(rng.integers(2, n_max + 1))
    names = [f"v{i}" for i in range(n)]
    g = ConversationalGraph(directed=True)
    for name in names:
        g.add_vertex(name)
    order = rng.permutation(n)
    def wgt():
        return float(rng.uniform(0.2, 3.0)) if weighted else 1.0
    for k in range(n):
        g.add_weight(names[order[k]], names[order[(k + 1) % n]], wgt())
    extra = int(rng.integers(0, 2 * n))
    for _ in range(extra):
        i, j = rng.integers(0, n, size=2)
        if i != j:
            g.add_weight(names[i], names[j], wgt())
    return g.freeze()
