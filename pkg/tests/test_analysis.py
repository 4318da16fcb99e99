"""Correlation and clustering tests against literal oracles."""

import numpy as np
import pytest

import oracles
from chatgraph.analysis import (AnalysisError, cluster_features,
                                constant_features, local_optimality_witness,
                                mean_silhouette, pearson_matrix,
                                render_cluster_report)
from chatgraph.features import Dataset


def dataset(matrix, names=None):
    matrix = np.asarray(matrix, dtype=np.float64)
    n, p = matrix.shape
    names = tuple(names or (f"f{i}" for i in range(p)))
    return Dataset(matrix, np.zeros(n, dtype=np.int64),
                   tuple(f"m{i}" for i in range(n)), names)


class TestConstants:
    def test_injected_constant_detected(self):
        x = np.random.default_rng(0).normal(size=(10, 3))
        x[:, 1] = 4.0
        assert constant_features(dataset(x)) == ("f1",)

    def test_near_constant_under_tolerance(self):
        x = np.random.default_rng(1).normal(size=(8, 2))
        x[:, 0] = 1.0
        x[0, 0] = 1.0 + 1e-15  # variance ~1e-31, below the 1e-15 std rule
        assert "f0" in constant_features(dataset(x))

    def test_no_constants(self):
        x = np.random.default_rng(2).normal(size=(10, 4))
        assert constant_features(dataset(x)) == ()


class TestPearson:
    def test_self_and_negation(self):
        rng = np.random.default_rng(3)
        col = rng.normal(size=12)
        x = np.column_stack([col, -col, rng.normal(size=12)])
        corr = pearson_matrix(dataset(x))
        assert corr[0, 0] == 1.0
        assert corr[0, 1] == pytest.approx(-1.0, abs=1e-12)

    def test_matches_direct_formula(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(5, 3))
        corr = pearson_matrix(dataset(x))
        for i in range(3):
            for j in range(3):
                want = oracles.pearson(x[:, i].tolist(), x[:, j].tolist())
                assert corr[i, j] == pytest.approx(want, abs=1e-12)

    def test_constant_rows_zeroed_except_diagonal(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(9, 3))
        x[:, 2] = 7.0
        corr = pearson_matrix(dataset(x))
        assert corr[2, 0] == corr[0, 2] == corr[2, 1] == 0.0
        assert corr[2, 2] == 1.0

    def test_symmetry_and_bounds(self):
        rng = np.random.default_rng(6)
        corr = pearson_matrix(dataset(rng.normal(size=(20, 8))))
        assert np.array_equal(corr, corr.T)
        assert np.abs(corr).max() <= 1.0 + 1e-12
        assert np.diag(corr).tolist() == [1.0] * 8

    def test_needs_two_rows(self):
        with pytest.raises(AnalysisError, match="2 rows"):
            pearson_matrix(dataset(np.ones((1, 3))))


class TestSilhouette:
    def test_matches_literal_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(4, 12))
            d = rng.uniform(0.1, 2.0, size=(n, n))
            d = (d + d.T) / 2
            np.fill_diagonal(d, 0.0)
            labels = rng.integers(0, 3, size=n)
            if len(np.unique(labels)) < 2:
                continue
            want = np.mean(oracles.silhouette_values(d.tolist(),
                                                     labels.tolist()))
            assert mean_silhouette(d, labels) == pytest.approx(want,
                                                               abs=1e-12)

    def test_single_cluster_rejected(self):
        with pytest.raises(AnalysisError, match="2 clusters"):
            mean_silhouette(np.zeros((3, 3)), np.array([1, 1, 1]))


class TestLinkageAgainstUPGMA:
    def test_heights_and_partitions(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            p = int(rng.integers(4, 9))
            base = rng.normal(size=(30, p))
            corr = pearson_matrix(dataset(base))
            cut = cluster_features(corr)
            dist = 1.0 - np.abs(corr)
            np.fill_diagonal(dist, 0.0)
            heights, partitions = oracles.average_linkage(dist.tolist())
            assert cut.linkage_matrix[:, 2] == pytest.approx(heights,
                                                             abs=1e-9)
            diffs = np.diff(cut.linkage_matrix[:, 2])
            assert (diffs >= -1e-12).all()
            got = {}
            for c in range(cut.k):
                got.setdefault(c, set())
            for i, c in enumerate(cut.labels):
                got[int(c)] = got.get(int(c), set()) | {i}
            want = partitions[cut.k]
            assert {frozenset(v) for v in got.values()} == want

    def test_chosen_cut_beats_neighbors(self):
        rng = np.random.default_rng(9)
        corr = pearson_matrix(dataset(rng.normal(size=(25, 7))))
        cut = cluster_features(corr)
        scores = dict(cut.by_k)
        for nb in (cut.k - 1, cut.k + 1):
            if nb in scores:
                assert cut.mean_silhouette >= scores[nb]
        witness = local_optimality_witness(cut)
        assert f"s(k={cut.k})" in witness


class TestClusterFeatures:
    def test_two_blocks_recovered(self):
        rng = np.random.default_rng(10)
        a, b = rng.normal(size=30), rng.normal(size=30)
        x = np.column_stack([a, a + 1e-9 * rng.normal(size=30), -a,
                             b, 2 * b + 1e-9 * rng.normal(size=30)])
        cut = cluster_features(pearson_matrix(dataset(x)))
        assert cut.k == 2
        assert len(set(cut.labels[:3])) == 1
        assert len(set(cut.labels[3:])) == 1
        assert cut.labels[0] != cut.labels[3]

    def test_three_duplicate_blocks_recovered_exactly(self):
        rng = np.random.default_rng(11)
        bases = rng.normal(size=(60, 3))
        cols = [bases[:, i] + 1e-8 * rng.normal(size=60)
                for i in range(3) for _ in range(4)]
        cut = cluster_features(pearson_matrix(dataset(np.column_stack(cols))))
        assert cut.k == 3
        want = [i // 4 for i in range(12)]
        assert cut.labels.tolist() == want

    def test_uncorrelated_features_score_near_zero_smallest_k_on_ties(self):
        rng = np.random.default_rng(13)
        cut = cluster_features(pearson_matrix(dataset(
            rng.normal(size=(200, 9)))))
        assert abs(cut.mean_silhouette) <= 0.35
        top = max(s for _, s in cut.by_k)
        assert cut.k == min(k for k, s in cut.by_k if s == top)

    def test_fully_tied_distances_leave_no_valid_cut(self):
        # identity correlation makes every merge height equal, so each
        # maxclust cut collapses to a single cluster
        with pytest.raises(AnalysisError, match="no cut"):
            cluster_features(np.eye(6))

    def test_exact_duplicates_share_a_cluster_at_every_cut(self):
        corr = np.array([[1.0, 1.0, 0.1],
                         [1.0, 1.0, 0.1],
                         [0.1, 0.1, 1.0]])
        cut = cluster_features(corr)
        assert cut.labels[0] == cut.labels[1]
        assert len(cut.by_k) == 1  # p = 3 admits only k = 2

    def test_too_few_features(self):
        with pytest.raises(AnalysisError, match="3 features"):
            cluster_features(np.eye(2))

    def test_non_square_rejected(self):
        with pytest.raises(AnalysisError, match="square"):
            cluster_features(np.ones((3, 4)))


class TestReport:
    def test_report_structure(self):
        rng = np.random.default_rng(12)
        a = rng.normal(size=40)
        x = np.column_stack([a, a * 3, rng.normal(size=40),
                             rng.normal(size=40)])
        ds = dataset(x, names=("dup1", "dup2", "noise1", "noise2"))
        corr = pearson_matrix(ds)
        cut = cluster_features(corr)
        text = render_cluster_report(ds.feature_names, corr, cut)
        for name in ds.feature_names:
            assert f"  {name}" in text
        assert "chosen cut" in text
        assert "local optimum" in text
        assert "mean within-cluster |r|" in text
