"""Oracle and contract tests for the linear learner, CV and RFE."""

import numpy as np
import pytest

from chatgraph.features import Dataset
from chatgraph.learning import (HyperParams, LearnError,
                                abuse_metrics, cross_validate, predict,
                                read_model, rfe, standardize_apply,
                                standardize_fit, stratified_parts,
                                train_linear, write_model)


def dataset(matrix, labels, names=None):
    matrix = np.asarray(matrix, dtype=np.float64)
    names = tuple(names or (f"f{i}" for i in range(matrix.shape[1])))
    ids = tuple(f"m{i}" for i in range(matrix.shape[0]))
    return Dataset(matrix, np.asarray(labels), ids, names)


class TestScaler:
    def test_two_point_column(self):
        s = standardize_fit(np.array([[0.0], [2.0]]))
        out = standardize_apply(s, np.array([[0.0], [2.0]]))
        assert out[:, 0].tolist() == [-1.0, 1.0]

    def test_constant_column_passes_through_as_zero(self):
        rows = np.array([[3.0, 1.0], [3.0, 2.0], [3.0, 3.0]])
        s = standardize_fit(rows)
        assert s.constant.tolist() == [True, False]
        assert s.std[0] == 1.0
        assert standardize_apply(s, rows)[:, 0].tolist() == [0.0, 0.0, 0.0]

    def test_apply_uses_train_stats(self):
        s = standardize_fit(np.array([[0.0], [2.0]]))
        out = standardize_apply(s, np.array([[4.0]]))
        assert out[0, 0] == 3.0  # (4 - 1) / 1, not this row's own stats

    def test_empty_train_set(self):
        with pytest.raises(LearnError):
            standardize_fit(np.empty((0, 3)))


class TestTrainer:
    def test_separable_toy_reaches_perfect_training_accuracy(self):
        rng = np.random.default_rng(0)
        x = np.vstack([rng.normal(-2.0, 0.3, size=(20, 2)),
                       rng.normal(2.0, 0.3, size=(20, 2))])
        y = np.array([0] * 20 + [1] * 20)
        model = train_linear(dataset(x, y))
        labels, _ = predict(model, x)
        assert (labels == y).all()

    def test_identical_features_fall_back_to_majority(self):
        x = np.ones((8, 3)) * 5.0
        y = np.array([1, 0, 0, 0, 0, 0, 1, 0])
        model = train_linear(dataset(x, y),
                             HyperParams(class_weighted=False))
        assert model.weights.tolist() == [0.0, 0.0, 0.0]
        labels, _ = predict(model, x)
        assert labels.tolist() == [0] * 8
        flipped = train_linear(dataset(x, 1 - y),
                               HyperParams(class_weighted=False))
        labels, _ = predict(flipped, x)
        assert labels.tolist() == [1] * 8

    def test_xor_cannot_be_separated(self):
        # any linear rule misclassifies at least one of the four corners,
        # so training accuracy is capped at 3/4
        x = np.array([[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]])
        y = np.array([0, 1, 1, 0])
        model = train_linear(dataset(x, y), HyperParams(epochs=2000))
        labels, _ = predict(model, x)
        assert (labels == y).mean() <= 0.75

    def test_single_class_rejected(self):
        with pytest.raises(LearnError, match="both classes"):
            train_linear(dataset(np.ones((4, 2)), [1, 1, 1, 1]))

    def test_zero_margin_predicts_negative(self):
        model = train_linear(dataset([[0.0], [1.0]], [0, 1]),
                             HyperParams(epochs=1))
        zeroed = type(model)(np.zeros(1), 0.0, model.scaler, model.hyper,
                             0.0, model.feature_names)
        labels, margins = predict(zeroed, np.array([[5.0]]))
        assert margins[0] == 0.0 and labels[0] == 0

    def test_positive_rescaling_preserves_labels(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(30, 4))
        y = (x[:, 0] + 0.2 * rng.normal(size=30) > 0).astype(int)
        model = train_linear(dataset(x, y))
        scaled = type(model)(model.weights * 7.5, model.bias * 7.5,
                             model.scaler, model.hyper, 0.0,
                             model.feature_names)
        flipped = type(model)(-model.weights, -model.bias, model.scaler,
                              model.hyper, 0.0, model.feature_names)
        base, margins = predict(model, x)
        up, _ = predict(scaled, x)
        down, _ = predict(flipped, x)
        assert (base == up).all()
        # sign flip flips every strictly-classified point
        strict = margins != 0
        assert (down[strict] == 1 - base[strict]).all()

    def test_constant_feature_weight_stays_zero(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(40, 3))
        x[:, 1] = 9.0
        y = (x[:, 0] > 0).astype(int)
        model = train_linear(dataset(x, y))
        assert model.weights[1] == 0.0


class TestMetrics:
    def test_counts(self):
        m = abuse_metrics([1, 1, 0, 0, 1], [1, 0, 1, 0, 1])
        assert m.precision == pytest.approx(2 / 3)
        assert m.recall == pytest.approx(2 / 3)
        assert m.f_measure == pytest.approx(2 / 3)

    def test_zero_denominators(self):
        m = abuse_metrics([0, 0], [0, 0])
        assert (m.precision, m.recall, m.f_measure) == (0.0, 0.0, 0.0)

    def test_f_identity(self):
        m = abuse_metrics([1, 0, 1, 1], [1, 1, 0, 1])
        want = 2 * m.precision * m.recall / (m.precision + m.recall)
        assert abs(m.f_measure - want) <= 1e-12


class TestStratifiedParts:
    def test_partition_invariants(self):
        rng = np.random.default_rng(9)
        labels = (rng.random(47) < 0.3).astype(int)
        parts = stratified_parts(labels, 4, seed=2)
        flat = np.concatenate(parts)
        assert sorted(flat.tolist()) == list(range(47))
        for cls in (0, 1):
            sizes = [int((labels[p] == cls).sum()) for p in parts]
            assert max(sizes) - min(sizes) <= 1

    def test_deterministic(self):
        labels = np.array([0, 1] * 20)
        a = stratified_parts(labels, 10, seed=5)
        b = stratified_parts(labels, 10, seed=5)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_small_class_rejected(self):
        with pytest.raises(LearnError, match="fewer than"):
            stratified_parts(np.array([1, 0, 0, 0, 0]), 3, seed=0)


def noise_dataset(rng, n=200, p=6, prior=0.25):
    x = rng.normal(size=(n, p))
    labels = (rng.random(n) < prior).astype(int)
    return dataset(x, labels)


class TestCrossValidate:
    def test_separable_dataset_scores_one(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(80, 3))
        y = (x[:, 0] > 0).astype(int)
        x[:, 0] += np.where(y == 1, 2.0, -2.0)
        report = cross_validate(dataset(x, y), parts=10, train_parts=7)
        assert report.mean_f == 1.0

    def test_identical_seed_identical_report(self):
        rng = np.random.default_rng(12)
        ds = noise_dataset(rng)
        a = cross_validate(ds, seed=3)
        b = cross_validate(ds, seed=3)
        assert a.runs == b.runs
        assert a.fold_weights.tobytes() == b.fold_weights.tobytes()

    def test_f_identity_holds_every_run(self):
        rng = np.random.default_rng(13)
        report = cross_validate(noise_dataset(rng), seed=1)
        for m in report.runs:
            if m.precision + m.recall > 0:
                want = 2 * m.precision * m.recall / (m.precision + m.recall)
                assert abs(m.f_measure - want) <= 1e-12
            else:
                assert m.f_measure == 0.0
        assert report.mean_f == pytest.approx(
            np.mean([m.f_measure for m in report.runs]))

    def test_lockstep_folds_match_sequential_training(self):
        rng = np.random.default_rng(14)
        x = rng.normal(size=(60, 5))
        y = (x[:, 0] + 0.5 * rng.normal(size=60) > 0).astype(int)
        ds = dataset(x, y)
        hyper = HyperParams(epochs=60, tolerance=0.0)
        parts, train_parts, seed = 5, 3, 7
        report = cross_validate(ds, hyper, parts, train_parts, seed)
        part_ids = stratified_parts(ds.labels, parts, seed)
        for r in range(parts):
            chosen = {(r + i) % parts for i in range(train_parts)}
            train = np.concatenate([part_ids[j] for j in sorted(chosen)])
            test = np.concatenate([part_ids[j] for j in range(parts)
                                   if j not in chosen])
            sub = dataset(x[train], y[train])
            model = train_linear(sub, hyper)
            assert report.fold_weights[:, r] == pytest.approx(
                model.weights, abs=1e-9)
            labels, _ = predict(model, x[test])
            got = abuse_metrics(y[test], labels)
            assert got.f_measure == pytest.approx(
                report.runs[r].f_measure, abs=1e-12)
        assert report.mean_abs_weights == pytest.approx(
            np.abs(report.fold_weights).mean(axis=1))

    def test_permuted_labels_score_near_independence_baseline(self):
        # with labels independent of the features, expected F is
        # 2*p*q/(p+q) where p is the class prior and q the model's
        # positive-prediction rate
        rng = np.random.default_rng(15)
        ds = noise_dataset(rng, n=400, p=8, prior=0.25)
        report = cross_validate(ds, seed=2)
        model = train_linear(ds)
        labels, _ = predict(model, ds.matrix)
        q = labels.mean()
        prior = ds.labels.mean()
        expected = 2 * prior * q / (prior + q) if prior + q else 0.0
        assert report.mean_f == pytest.approx(expected, abs=0.15)

    def test_train_parts_validated(self):
        rng = np.random.default_rng(16)
        with pytest.raises(LearnError, match="train_parts"):
            cross_validate(noise_dataset(rng), parts=10, train_parts=10)


class TestRFE:
    def planted(self, rng, noise=20, n=120):
        x = rng.normal(size=(n, noise + 1))
        y = (rng.random(n) < 0.4).astype(int)
        x[:, 0] = y * 2.0 - 1.0  # feature f0 encodes the label exactly
        names = ["predictive"] + [f"noise{i}" for i in range(noise)]
        return dataset(x, y, names)

    def test_planted_predictor_survives_elimination(self):
        rng = np.random.default_rng(21)
        ds = self.planted(rng)
        result = rfe(ds, retention=0.97, seed=1)
        assert "predictive" in result.selected
        assert len(result.selected) < ds.n_features / 2
        assert result.baseline_f == result.steps[0].mean_f
        sizes = [s.n_features for s in result.steps]
        assert sizes == list(range(ds.n_features, 0, -1))

    def test_zero_retention_shrinks_to_one(self):
        rng = np.random.default_rng(22)
        result = rfe(self.planted(rng, noise=6, n=60), retention=0.0, seed=1)
        assert len(result.selected) == 1
        assert result.selected == ("predictive",)

    def test_full_retention_follows_the_trace(self):
        rng = np.random.default_rng(23)
        ds = self.planted(rng, noise=6, n=60)
        result = rfe(ds, retention=1.0, seed=1)
        qualifying = [s.n_features for s in result.steps
                      if s.mean_f >= result.threshold]
        assert len(result.selected) == qualifying[-1]

    def test_trace_reproducible(self):
        rng = np.random.default_rng(24)
        ds = self.planted(rng, noise=8, n=60)
        a = rfe(ds, seed=4)
        b = rfe(ds, seed=4)
        assert a.steps == b.steps
        assert a.selected == b.selected

    def test_retention_validated(self):
        rng = np.random.default_rng(25)
        with pytest.raises(LearnError, match="retention"):
            rfe(self.planted(rng, noise=4, n=60), retention=1.5)


class TestModelIO:
    def test_round_trip_preserves_predictions(self, tmp_path):
        rng = np.random.default_rng(31)
        x = rng.normal(size=(50, 4))
        x[:, 2] = 1.0  # exercise the constant-column flag
        y = (x[:, 0] > 0).astype(int)
        model = train_linear(dataset(x, y))
        path = tmp_path / "model.txt"
        write_model(model, path)
        back = read_model(path)
        assert back.feature_names == model.feature_names
        assert back.scaler.constant.tolist() == \
            model.scaler.constant.tolist()
        _, m1 = predict(model, x)
        _, m2 = predict(back, x)
        assert m1.tobytes() == m2.tobytes()

    def test_write_is_byte_stable(self, tmp_path):
        model = train_linear(dataset([[0.0, 1.0], [1.0, 0.0]], [0, 1]))
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        write_model(model, a)
        write_model(model, b)
        assert a.read_bytes() == b.read_bytes()

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.txt"
        path.write_text("something else\n")
        with pytest.raises(LearnError, match="not a model file"):
            read_model(path)
