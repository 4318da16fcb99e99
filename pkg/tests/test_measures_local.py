"""Degree-family, transitivity, constraint and mixing statistics."""

import numpy as np
import pytest

import oracles
from chatgraph.measures import local
from helpers import dense_views, graph_from_edges, random_graph


def star(k=3):
    return graph_from_edges([("c", f"l{i}", 1.0) for i in range(k)],
                            directed=False)


class TestDegreeStrength:
    def test_star_degree_centrality(self):
        g = star(3)
        dc = local.degree_centrality(dense_views(g)[3], "undirected")
        assert dc[g.index("c")] == 1.0
        assert dc[g.index("l0")] == pytest.approx(1 / 3)

    def test_directed_edge_modes(self):
        g = graph_from_edges([("a", "b", 1.0)])
        b = dense_views(g)[2]
        assert local.degree_centrality(b, "in")[g.index("b")] == 1.0
        assert local.degree_centrality(b, "out")[g.index("b")] == 0.0

    def test_single_vertex_is_zero(self):
        g = graph_from_edges([], vertices=["a"])
        assert local.degree_centrality(dense_views(g)[2], "undirected").tolist() == [0.0]

    def test_strength_examples(self):
        g = graph_from_edges([("a", "b", 0.6), ("a", "c", 0.4)],
                             directed=False, vertices=["z"])
        s = local.strength_vector(dense_views(g)[1], "undirected")
        assert s[g.index("a")] == pytest.approx(1.0)
        assert s[g.index("z")] == 0.0
        d = graph_from_edges([("a", "b", 2.0), ("b", "a", 3.0)])
        assert local.strength_vector(dense_views(d)[0], "out")[d.index("a")] == 2.0

    def test_matches_edge_scan(self):
        rng = np.random.default_rng(201)
        for _ in range(40):
            g = random_graph(rng, n_max=7)
            w, wsym, b, bsym = dense_views(g)
            modes = ("in", "out") if g.directed else ("undirected",)
            for mode in modes:
                adj_b = b if g.directed else bsym
                adj_w = w if g.directed else wsym
                np.testing.assert_allclose(
                    local.degree_vector(adj_b, mode),
                    oracles.degree(adj_b, mode))
                np.testing.assert_allclose(
                    local.strength_vector(adj_w, mode),
                    oracles.strength(adj_w, mode), atol=1e-12)


class TestTransitivity:
    def test_triangle_local_is_one(self):
        g = graph_from_edges([("a", "b", 1.0), ("b", "c", 1.0),
                              ("a", "c", 1.0)], directed=False)
        lt = local.local_transitivity_unweighted(dense_views(g)[3])
        assert lt.tolist() == [1.0] * 3

    def test_path_center_zero(self):
        g = graph_from_edges([("a", "b", 1.0), ("b", "c", 1.0)],
                             directed=False)
        lt = local.local_transitivity_unweighted(dense_views(g)[3])
        assert lt[g.index("b")] == 0.0

    def test_barrat_closed_triangle_is_one(self):
        # all neighbor pairs closed, so weights cancel per vertex
        g = graph_from_edges([("a", "b", 1.0), ("a", "c", 1.0),
                              ("b", "c", 2.0)], directed=False)
        bt = local.local_transitivity_barrat(dense_views(g)[1])
        np.testing.assert_allclose(bt, [1.0, 1.0, 1.0])

    def test_k4_minus_edge_global(self):
        # two triangles over eight centered triples
        g = graph_from_edges([("a", "b", 1.0), ("a", "c", 1.0),
                              ("a", "d", 1.0), ("b", "c", 1.0),
                              ("b", "d", 1.0)], directed=False)
        assert local.global_transitivity(dense_views(g)[3]) == pytest.approx(0.75)
        assert oracles.global_transitivity(dense_views(g)[3]) == pytest.approx(0.75)

    def test_global_examples(self):
        k3 = graph_from_edges([("a", "b", 1.0), ("b", "c", 1.0),
                               ("a", "c", 1.0)], directed=False)
        assert local.global_transitivity(dense_views(k3)[3]) == 1.0
        p3 = graph_from_edges([("a", "b", 1.0), ("b", "c", 1.0)],
                              directed=False)
        assert local.global_transitivity(dense_views(p3)[3]) == 0.0

    def test_matches_enumeration(self):
        rng = np.random.default_rng(202)
        for _ in range(40):
            g = random_graph(rng, n_max=7)
            _, wsym, _, bsym = dense_views(g)
            np.testing.assert_allclose(
                local.local_transitivity_unweighted(bsym),
                oracles.local_transitivity(bsym), atol=1e-9)
            np.testing.assert_allclose(
                local.local_transitivity_barrat(wsym),
                oracles.barrat_transitivity(wsym), atol=1e-9)
            assert local.global_transitivity(bsym) == pytest.approx(
                oracles.global_transitivity(bsym), abs=1e-9)

    def test_barrat_scale_invariant(self):
        rng = np.random.default_rng(203)
        g = random_graph(rng, n_max=7, weight_style="continuous",
                         ensure_edge=True)
        _, wsym, _, _ = dense_views(g)
        a = local.local_transitivity_barrat(wsym)
        b = local.local_transitivity_barrat(wsym * 7.5)
        np.testing.assert_allclose(a, b, atol=1e-12)


class TestBurtsConstraint:
    def test_dyad(self):
        g = graph_from_edges([("a", "b", 1.0)], directed=False)
        vals, flags = local.burts_constraint(dense_views(g)[1])
        assert vals[0] == pytest.approx(1.0)
        assert not flags.any()

    def test_star_center(self):
        for k in (2, 3, 5):
            g = star(k)
            vals, _ = local.burts_constraint(dense_views(g)[1])
            assert vals[g.index("c")] == pytest.approx(1 / k)

    def test_equal_triangle(self):
        g = graph_from_edges([("a", "b", 1.0), ("b", "c", 1.0),
                              ("a", "c", 1.0)], directed=False)
        vals, _ = local.burts_constraint(dense_views(g)[1])
        np.testing.assert_allclose(vals, [1.125] * 3)

    def test_isolate_flagged(self):
        g = graph_from_edges([("a", "b", 1.0)], directed=False,
                             vertices=["z"])
        vals, flags = local.burts_constraint(dense_views(g)[1])
        assert vals[g.index("z")] == 0.0
        assert flags[g.index("z")]

    def test_matches_enumeration_and_scale(self):
        rng = np.random.default_rng(204)
        for _ in range(40):
            g = random_graph(rng, n_max=7, weight_style="mixed")
            _, wsym, _, _ = dense_views(g)
            vals, _ = local.burts_constraint(wsym)
            np.testing.assert_allclose(vals, oracles.burts_constraint(wsym),
                                       atol=1e-9)
            scaled, _ = local.burts_constraint(wsym * 3.25)
            np.testing.assert_allclose(vals, scaled, atol=1e-12)


class TestReciprocity:
    def test_examples(self):
        one_way = graph_from_edges([("a", "b", 1.0)])
        assert local.reciprocity(dense_views(one_way)[2]) == (0.0, False)
        mutual = graph_from_edges([("a", "b", 1.0), ("b", "a", 1.0)])
        assert local.reciprocity(dense_views(mutual)[2]) == (1.0, False)
        mixed = graph_from_edges([("a", "b", 1.0), ("b", "a", 1.0),
                                  ("a", "c", 1.0)])
        val, flag = local.reciprocity(dense_views(mixed)[2])
        assert val == pytest.approx(2 / 3) and not flag

    def test_empty_flagged(self):
        g = graph_from_edges([], vertices=["a", "b"])
        assert local.reciprocity(dense_views(g)[2]) == (0.0, True)

    def test_matches_pair_count(self):
        rng = np.random.default_rng(205)
        for _ in range(40):
            g = random_graph(rng, n_max=7, directed=True)
            b = dense_views(g)[2]
            want = oracles.reciprocity(b)
            val, flag = local.reciprocity(b)
            if want is None:
                assert flag and val == 0.0
            else:
                assert val == pytest.approx(want, abs=1e-12)


class TestAssortativity:
    def test_star_is_minus_one(self):
        g = star(3)
        val, flag = local.assortativity(dense_views(g)[3], directed=False)
        assert val == pytest.approx(-1.0) and not flag

    def test_regular_graph_degenerate(self):
        ring = graph_from_edges([("a", "b", 1.0), ("b", "c", 1.0),
                                 ("c", "d", 1.0), ("d", "a", 1.0)],
                                directed=False)
        assert local.assortativity(dense_views(ring)[3], False) == (0.0, True)

    def test_matches_correlation(self):
        rng = np.random.default_rng(206)
        for _ in range(60):
            g = random_graph(rng, n_max=7)
            _, _, b, bsym = dense_views(g)
            for directed in ({True, False} if g.directed else {False}):
                adj = b if directed else bsym
                want = oracles.assortativity(adj, directed)
                val, flag = local.assortativity(adj, directed)
                if want is None:
                    assert flag and val == 0.0
                else:
                    assert val == pytest.approx(want, abs=1e-9)


class TestBasicStats:
    def test_examples(self):
        assert local.basic_stats(3, 3, directed=False)["density"] == 1.0
        assert local.basic_stats(1, 0, directed=False)["density"] == 0.0
        assert local.basic_stats(3, 1, directed=True)["density"] == pytest.approx(1 / 6)

    def test_counts_pass_through(self):
        stats = local.basic_stats(5, 7, directed=True)
        assert stats["vertex_count"] == 5.0
        assert stats["edge_count"] == 7.0
