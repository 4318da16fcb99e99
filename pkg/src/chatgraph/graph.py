"""Weighted directed conversational graph with undirected/unweighted views.

Vertices are user identifiers; their integer indices follow insertion order,
which downstream code relies on for deterministic, relabel-invariant results
(renaming users never changes indices, because indices are fixed by message
order during extraction). Edges carry strictly positive accumulated weights;
self-loops are rejected. An undirected graph stores each edge once under a
canonical unordered key. The undirected view of a directed graph merges
antiparallel edges by summing their weights; unweighted views expose every
edge with weight 1.

Weighted shortest-path measures elsewhere treat traversal cost as 1/weight
(stronger interaction means closer); a flag on the measure configuration can
switch to raw weights as cost.
"""

from __future__ import annotations

import numpy as np

UNDIRECTED = "undirected"
DIRECTED = "directed"
IN = "in"
OUT = "out"
_MODES = (UNDIRECTED, DIRECTED, IN, OUT)


class GraphError(ValueError):
    pass


class ConversationalGraph:
    """Mutable while building, frozen before measurement."""

    __slots__ = ("directed", "_names", "_index", "_edges", "_frozen",
                 "_w_cache")

    def __init__(self, directed: bool = True):
        self.directed = directed
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        self._edges: dict[tuple[int, int], float] = {}
        self._frozen = False
        self._w_cache: np.ndarray | None = None

    # -- construction -----------------------------------------------------

    def add_vertex(self, name: str) -> int:
        """Insert a vertex if new; return its index."""
        idx = self._index.get(name)
        if idx is None:
            if self._frozen:
                raise GraphError("graph is frozen")
            idx = len(self._names)
            self._names.append(name)
            self._index[name] = idx
        return idx

    def add_weight(self, u: str, v: str, w: float) -> None:
        """Accumulate weight w onto edge u->v (or {u,v} if undirected)."""
        if u == v:
            raise GraphError(f"self-interaction is undefined: {u!r}")
        if not w > 0:
            raise GraphError(f"weight must be positive, got {w}")
        if self._frozen:
            raise GraphError("graph is frozen")
        ui = self.add_vertex(u)
        vi = self.add_vertex(v)
        key = (ui, vi) if self.directed else (min(ui, vi), max(ui, vi))
        self._edges[key] = self._edges.get(key, 0.0) + w

    def freeze(self) -> "ConversationalGraph":
        self._frozen = True
        return self

    # -- introspection ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._names)

    @property
    def vertex_names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise GraphError(f"unknown vertex: {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def weight(self, u: str, v: str) -> float:
        ui, vi = self._index.get(u), self._index.get(v)
        if ui is None or vi is None:
            return 0.0
        key = (ui, vi) if self.directed else (min(ui, vi), max(ui, vi))
        return self._edges.get(key, 0.0)

    def edges(self):
        """Iterate (u_index, v_index, weight) in index-sorted order."""
        for key in sorted(self._edges):
            yield key[0], key[1], self._edges[key]

    def total_weight(self) -> float:
        return float(sum(self._edges.values()))

    # -- dense matrices ----------------------------------------------------

    def weighted_matrix(self) -> np.ndarray:
        """Dense adjacency; A[i, j] = w(i->j), symmetric if undirected."""
        if self._w_cache is not None:
            return self._w_cache
        n = self.n
        a = np.zeros((n, n), dtype=np.float64)
        for (ui, vi), w in self._edges.items():
            a[ui, vi] = w
            if not self.directed:
                a[vi, ui] = w
        if self._frozen:
            self._w_cache = a
        return a

    # -- views -------------------------------------------------------------

    def view(self, use_weights: bool, direction_mode: str) -> "GraphView":
        return GraphView(self, use_weights, direction_mode)

    # -- dump --------------------------------------------------------------

    def dump_edge_list(self) -> str:
        """Edge-list text: "u<TAB>v<TAB>weight" lines, isolates as "u"."""
        touched = set()
        lines = []
        for ui, vi, w in self.edges():
            touched.add(ui)
            touched.add(vi)
            lines.append(f"{self._names[ui]}\t{self._names[vi]}\t{w!r}")
        for i, name in enumerate(self._names):
            if i not in touched:
                lines.append(name)
        return "\n".join(lines) + ("\n" if lines else "")


class GraphView:
    """Read-only (use_weights, direction_mode) adapter over a graph.

    In/Out modes are only meaningful for directed graphs; they share the
    directed matrix, and each measure interprets rows (out) versus columns
    (in) itself.
    """

    __slots__ = ("base", "use_weights", "direction_mode")

    def __init__(self, base: ConversationalGraph, use_weights: bool,
                 direction_mode: str):
        if direction_mode not in _MODES:
            raise GraphError(f"unknown direction mode: {direction_mode!r}")
        if direction_mode in (DIRECTED, IN, OUT) and not base.directed:
            raise GraphError(
                f"{direction_mode} view requires a directed graph")
        self.base = base
        self.use_weights = use_weights
        self.direction_mode = direction_mode

    @property
    def n(self) -> int:
        return self.base.n

    def matrix(self) -> np.ndarray:
        a = self.base.weighted_matrix()
        if self.direction_mode == UNDIRECTED and self.base.directed:
            a = a + a.T
        if not self.use_weights:
            a = (a > 0).astype(np.float64)
        return a
