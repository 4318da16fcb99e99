"""Lazy measure engine: one instance per frozen graph.

The engine owns the dense view matrices and memoizes every intermediate
artifact (APSP tables, betweenness vectors, spectral fixed points, the
community partition, role vectors, scalar graph statistics), so that
evaluating a feature catalog touches exactly the machinery its entries
need: a restricted catalog skips the expensive distance/flow/spectral work
entirely, and vertex-scale and graph-average entries of the same measure
share one computation.

Measure identifiers and their (weighted, direction) axes are listed in the
features module; axis letters are w ('u'/'w') and d ('u'/'d'/'i'/'o').
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import ConversationalGraph, GraphError
from .measures import community as community_m
from .measures import connectivity as conn_m
from .measures import local as local_m
from .measures import paths as paths_m
from .measures import spectral as spectral_m


class MeasureError(ValueError):
    pass


@dataclass(frozen=True)
class MeasureConfig:
    """Free parameters of the measure catalog.

    alpha_attenuation/power_exponent of None resolve per graph to
    0.5/lambda_max and 0.25/lambda_max of the variant's adjacency.
    reciprocal_cost switches weighted traversal cost between 1/weight
    (default) and the raw weight.
    """

    pagerank_damping: float = 0.85
    alpha_attenuation: float | None = None
    power_exponent: float | None = None
    iteration_tolerance: float = 1e-10
    max_iterations: int = 10000
    reciprocal_cost: bool = True
    community_seed: int = 0
    clique_vertex_bound: int = 512

    def __post_init__(self):
        if not 0 < self.pagerank_damping < 1:
            raise MeasureError("pagerank damping must be in (0, 1)")
        if self.iteration_tolerance <= 0:
            raise MeasureError("iteration tolerance must be positive")


_DIR_MODE = {"u": "undirected", "i": "in", "o": "out", "d": "directed"}


class MeasureEngine:
    """Per-graph measure evaluator with memoized intermediates."""

    def __init__(self, graph: ConversationalGraph,
                 config: MeasureConfig | None = None):
        self.graph = graph
        self.config = config or MeasureConfig()
        self.n = graph.n
        self._cache: dict = {}
        self.degenerate: dict = {}

    # -- matrices ---------------------------------------------------------

    def _matrix(self, weighted: bool, directed: bool) -> np.ndarray:
        key = ("mat", weighted, directed)
        got = self._cache.get(key)
        if got is not None:
            return got
        if directed and not self.graph.directed:
            raise GraphError("directed view requires a directed graph")
        base = self.graph.weighted_matrix()
        if not directed and self.graph.directed:
            base = base + base.T
        m = base if weighted else (base > 0).astype(np.float64)
        self._cache[key] = m
        return m

    def _view_matrix(self, w: str, d: str) -> np.ndarray:
        return self._matrix(w == "w", d != "u")

    # -- shared intermediates ---------------------------------------------

    def _apsp(self, weighted: bool, directed: bool) -> np.ndarray:
        key = ("apsp", weighted, directed)
        got = self._cache.get(key)
        if got is None:
            got = paths_m.apsp(self._matrix(weighted, directed), weighted,
                               self.config.reciprocal_cost)
            self._cache[key] = got
        return got

    def _partition(self) -> np.ndarray:
        got = self._cache.get("partition")
        if got is None:
            got = community_m.detect_communities(
                self._matrix(False, False), self.config.community_seed)
            self._cache["partition"] = got
        return got

    def _roles(self, d: str) -> dict[str, np.ndarray]:
        key = ("roles", d)
        got = self._cache.get(key)
        if got is None:
            mat = self._matrix(False, d != "u")
            got = community_m.vertex_roles(mat, _DIR_MODE[d],
                                           self._partition())
            self._cache[key] = got
        return got

    def _hits(self, w: str) -> tuple[np.ndarray, np.ndarray]:
        key = ("hits", w)
        got = self._cache.get(key)
        if got is None:
            got = spectral_m.hits(self._view_matrix(w, "d"),
                                  self.config.iteration_tolerance,
                                  self.config.max_iterations)
            self._cache[key] = got
        return got

    def _articulation_marks(self) -> np.ndarray:
        got = self._cache.get("articulation")
        if got is None:
            got = conn_m.articulation_points(self._matrix(False, False))
            self._cache["articulation"] = got
        return got

    def _components(self) -> dict:
        got = self._cache.get("components")
        if got is None:
            if self.graph.directed:
                got = conn_m.component_counts(self._matrix(False, True), True)
            else:
                got = conn_m.component_counts(self._matrix(False, False),
                                              False)
            self._cache["components"] = got
        return got

    def _conn_matrix(self) -> tuple[np.ndarray, bool]:
        """Binary matrix and directedness for cohesion/adhesion."""
        if self.graph.directed:
            return self._matrix(False, True), True
        return self._matrix(False, False), False

    # -- vertex-scale vectors ---------------------------------------------

    def vertex_vector(self, measure: str, w: str, d: str) -> np.ndarray:
        """Full per-vertex vector of a measure variant (memoized)."""
        key = (measure, w, d)
        got = self._cache.get(key)
        if got is not None:
            return got
        got = self._compute_vertex(measure, w, d)
        self._cache[key] = got
        return got

    def _compute_vertex(self, measure: str, w: str, d: str) -> np.ndarray:
        cfg = self.config
        tol, maxit = cfg.iteration_tolerance, cfg.max_iterations
        if measure == "eigenvector":
            return spectral_m.eigenvector(self._view_matrix(w, d), tol, maxit)
        if measure == "hub":
            return self._hits(w)[0]
        if measure == "authority":
            return self._hits(w)[1]
        if measure == "alpha":
            return spectral_m.alpha_centrality(self._view_matrix(w, "d"),
                                               cfg.alpha_attenuation, tol,
                                               maxit)
        if measure == "power":
            return spectral_m.power_centrality(self._view_matrix("u", "d"),
                                               cfg.power_exponent, tol, maxit)
        if measure == "pagerank":
            return spectral_m.pagerank(self._view_matrix(w, d),
                                       cfg.pagerank_damping, tol, maxit)
        if measure == "subgraph":
            return spectral_m.subgraph_centrality(self._matrix(False, False))
        if measure == "betweenness":
            return paths_m.betweenness(self._view_matrix(w, d), w == "w",
                                       d != "u", cfg.reciprocal_cost)
        if measure == "closeness":
            table = self._apsp(w == "w", d != "u")
            return paths_m.closeness_from_table(table, _DIR_MODE[d])
        if measure == "eccentricity":
            table = self._apsp(False, d != "u")
            return paths_m.eccentricity_from_table(table, _DIR_MODE[d])
        if measure == "articulation_point":
            return self._articulation_marks().astype(np.float64)
        if measure == "coreness":
            return community_m.coreness(self._matrix(False, d != "u"),
                                        _DIR_MODE[d]).astype(np.float64)
        if measure in ("participation", "external_intensity", "diversity",
                       "heterogeneity"):
            return self._roles(d)[measure]
        if measure == "internal_intensity":
            return self._roles(d)["within_module_degree"]
        if measure == "degree":
            return local_m.degree_centrality(self._matrix(False, d != "u"),
                                             _DIR_MODE[d])
        if measure == "strength":
            return local_m.strength_vector(self._matrix(True, d != "u"),
                                           _DIR_MODE[d])
        if measure == "local_transitivity":
            if w == "w":
                return local_m.local_transitivity_barrat(
                    self._matrix(True, False))
            return local_m.local_transitivity_unweighted(
                self._matrix(False, False))
        if measure == "burts_constraint":
            vals, flags = local_m.burts_constraint(
                self._matrix(w == "w", False))
            self.degenerate[("burts_constraint", w, d)] = bool(flags.any())
            return vals
        raise MeasureError(f"unknown vertex measure: {measure!r}")

    def vertex_value(self, measure: str, w: str, d: str, index: int) -> float:
        vec = self.vertex_vector(measure, w, d)
        if not 0 <= index < self.n:
            raise MeasureError(f"vertex index {index} out of range")
        return float(vec[index])

    def vertex_average(self, measure: str, w: str, d: str) -> float:
        vec = self.vertex_vector(measure, w, d)
        return float(vec.mean()) if vec.size else 0.0

    # -- graph-scale scalars ----------------------------------------------

    def graph_value(self, measure: str, w: str, d: str) -> float:
        key = ("g", measure, w, d)
        got = self._cache.get(key)
        if got is not None:
            return got
        got = float(self._compute_graph(measure, w, d))
        self._cache[key] = got
        return got

    def _compute_graph(self, measure: str, w: str, d: str) -> float:
        g = self.graph
        if measure == "weak_components":
            return self._components()["weak"]
        if measure == "strong_components":
            if not g.directed:
                raise GraphError("strong components require a directed graph")
            return self._components()["strong"]
        if measure == "adhesion":
            mat, directed = self._conn_matrix()
            return conn_m.edge_connectivity(mat, directed)
        if measure == "cohesion":
            mat, directed = self._conn_matrix()
            return conn_m.vertex_connectivity(mat, directed)
        if measure == "articulation_points":
            return float(self._articulation_marks().sum())
        if measure == "diameter":
            val, flag = paths_m.diameter(self._apsp(w == "w", d != "u"))
            self.degenerate[("diameter", w, d)] = flag
            return val
        if measure == "radius":
            val, flag = paths_m.radius(self._apsp(False, d != "u"),
                                       _DIR_MODE[d])
            self.degenerate[("radius", w, d)] = flag
            return val
        if measure == "avg_distance":
            val, flag = paths_m.average_distance(self._apsp(False, d != "u"))
            self.degenerate[("avg_distance", w, d)] = flag
            return val
        if measure == "clique_count":
            return conn_m.count_maximal_cliques(
                self._matrix(False, False), self.config.clique_vertex_bound)
        if measure == "community_count":
            return community_m.community_count(self._partition())
        if measure == "modularity":
            val, flag = community_m.modularity(
                self._matrix(w == "w", False), self._partition())
            self.degenerate[("modularity", w, d)] = flag
            return val
        if measure in ("vertex_count", "edge_count", "density"):
            stats = local_m.basic_stats(self.n, g.edge_count, g.directed)
            return stats[measure]
        if measure == "global_transitivity":
            return local_m.global_transitivity(self._matrix(False, False))
        if measure == "reciprocity":
            if not g.directed:
                raise GraphError("reciprocity requires a directed graph")
            val, flag = local_m.reciprocity(self._matrix(False, True))
            self.degenerate[("reciprocity", w, d)] = flag
            return val
        if measure == "assortativity":
            val, flag = local_m.assortativity(self._matrix(False, d != "u"),
                                              d != "u")
            self.degenerate[("assortativity", w, d)] = flag
            return val
        raise MeasureError(f"unknown graph measure: {measure!r}")
