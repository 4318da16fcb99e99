"""Standardization, hinge-loss linear classification, stratified CV, RFE.

The classifier is an L2-regularized hinge-loss linear model trained by
deterministic full-batch subgradient descent with step size
eta_t = 1/(1 + lambda*t), weights and bias initialized to zero and the
bias left unregularized.  The reported model averages the iterates of
the final half of the epochs (Polyak averaging); the raw subgradient
path keeps orbiting the optimum at this step size, and the tail mean
sits far closer to it than any single iterate.  A margin must be
strictly positive to predict the positive class, so a zero margin
deterministically yields label 0.

Cross-validation splits each class into `parts` shuffled slices and
rotates: run r trains on parts {r..r+train_parts-1 mod parts} and tests
on the rest.  All folds are trained in lockstep on the shared raw matrix
(per-fold standardization folded into the weights), which turns the per
epoch work into two matrix products.

Recursive elimination ranks features by mean absolute weight across the
fold models, drops the single lowest-ranked feature (ties fall to the
earliest catalog position), re-runs CV, and finally returns the last,
i.e. smallest, feature set whose mean F stayed at or above
retention * F_full.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import Dataset

CONSTANT_STD = 1e-15


class LearnError(ValueError):
    pass


# -- standardization ------------------------------------------------------

@dataclass(frozen=True)
class Scaler:
    mean: np.ndarray
    std: np.ndarray
    constant: np.ndarray  # columns whose population std fell below 1e-15


def standardize_fit(rows: np.ndarray) -> Scaler:
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 1:
        raise LearnError("standardization needs at least one row")
    mean = rows.mean(axis=0)
    std = rows.std(axis=0)
    constant = std <= CONSTANT_STD
    return Scaler(mean, np.where(constant, 1.0, std), constant)


def standardize_apply(scaler: Scaler, rows: np.ndarray) -> np.ndarray:
    return (np.asarray(rows, dtype=np.float64) - scaler.mean) / scaler.std


# -- model ----------------------------------------------------------------

@dataclass(frozen=True)
class HyperParams:
    # stiff enough that 400 epochs of the decaying schedule actually land
    # near the optimum; weaker penalties leave the solver visibly short
    regularization: float = 3e-2
    epochs: int = 400
    tolerance: float = 1e-10
    class_weighted: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.regularization <= 0:
            raise LearnError("regularization must be positive")
        if self.epochs < 1:
            raise LearnError("epochs must be >= 1")
        if self.tolerance < 0:
            raise LearnError("tolerance must be >= 0")


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray  # in standardized coordinates
    bias: float
    scaler: Scaler
    hyper: HyperParams
    final_objective: float
    feature_names: tuple[str, ...]


def _sample_weights(labels: np.ndarray, class_weighted: bool) -> np.ndarray:
    n = len(labels)
    pos = int(labels.sum())
    if pos == 0 or pos == n:
        raise LearnError("training set must contain both classes")
    if not class_weighted:
        return np.ones(n)
    w_pos, w_neg = n / (2.0 * pos), n / (2.0 * (n - pos))
    return np.where(labels == 1, w_pos, w_neg)


def _optimize(x: np.ndarray, y: np.ndarray, cw: np.ndarray,
              hyper: HyperParams) -> tuple[np.ndarray, float, float]:
    """Subgradient descent on one pre-scaled design matrix.

    The model handed back is the average of the iterates from the final
    half of the epochs (Polyak averaging), which cancels the oscillation
    a decaying-step subgradient path keeps around the optimum.
    """
    n, p = x.shape
    lam = hyper.regularization
    w = np.zeros(p)
    b = 0.0
    prev = None
    obj = 0.0
    tail_from = hyper.epochs // 2 + 1
    w_sum = np.zeros(p)
    b_sum = 0.0
    tail_n = 0
    for t in range(1, hyper.epochs + 1):
        margins = y * (x @ w + b)
        hinge = np.maximum(0.0, 1.0 - margins)
        obj = 0.5 * lam * (w @ w) + (cw * hinge).sum() / n
        if prev is not None and abs(prev - obj) <= \
                hyper.tolerance * max(1.0, abs(prev)):
            break
        prev = obj
        coef = cw * y * (margins < 1.0)
        eta = 1.0 / (1.0 + lam * t)
        w -= eta * (lam * w - (x.T @ coef) / n)
        b -= eta * (-coef.sum() / n)
        if t >= tail_from:
            w_sum += w
            b_sum += b
            tail_n += 1
    if tail_n:
        w = w_sum / tail_n
        b = b_sum / tail_n
        margins = y * (x @ w + b)
        hinge = np.maximum(0.0, 1.0 - margins)
        obj = 0.5 * lam * (w @ w) + (cw * hinge).sum() / n
    return w, b, obj


def train_linear(dataset: Dataset, hyper: HyperParams | None = None
                 ) -> LinearModel:
    hyper = hyper or HyperParams()
    if dataset.n_rows < 1:
        raise LearnError("cannot train on an empty dataset")
    scaler = standardize_fit(dataset.matrix)
    x = standardize_apply(scaler, dataset.matrix)
    y = dataset.labels * 2.0 - 1.0
    cw = _sample_weights(dataset.labels, hyper.class_weighted)
    w, b, obj = _optimize(x, y, cw, hyper)
    return LinearModel(w, float(b), scaler, hyper, float(obj),
                       tuple(dataset.feature_names))


def predict(model: LinearModel, rows: np.ndarray
            ) -> tuple[np.ndarray, np.ndarray]:
    """Labels and raw margins; label 1 needs a strictly positive margin."""
    scaled = standardize_apply(model.scaler, rows)
    margins = scaled @ model.weights + model.bias
    return (margins > 0).astype(np.int64), margins


# -- metrics --------------------------------------------------------------

@dataclass(frozen=True)
class RunMetrics:
    precision: float
    recall: float
    f_measure: float


def abuse_metrics(y_true: np.ndarray, y_pred: np.ndarray) -> RunMetrics:
    """Precision/recall/F for class 1; empty denominators yield 0."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    tp = int(((y_true == 1) & (y_pred == 1)).sum())
    predicted = int((y_pred == 1).sum())
    actual = int((y_true == 1).sum())
    precision = tp / predicted if predicted else 0.0
    recall = tp / actual if actual else 0.0
    f = (2 * precision * recall / (precision + recall)
         if precision + recall > 0 else 0.0)
    return RunMetrics(precision, recall, f)


# -- cross-validation -----------------------------------------------------

def stratified_parts(labels: np.ndarray, parts: int, seed: int
                     ) -> list[np.ndarray]:
    """Per-class shuffle, then deal round-robin into `parts` slices."""
    labels = np.asarray(labels)
    if parts < 2:
        raise LearnError("need at least 2 parts")
    rng = np.random.default_rng(seed)
    out: list[list[int]] = [[] for _ in range(parts)]
    for cls in (0, 1):
        idx = np.flatnonzero(labels == cls)
        if len(idx) < parts:
            raise LearnError(
                f"class {cls} has {len(idx)} rows, fewer than {parts} parts")
        shuffled = rng.permutation(idx)
        for j in range(parts):
            out[j].extend(shuffled[j::parts].tolist())
    return [np.array(p, dtype=np.int64) for p in out]


@dataclass(frozen=True)
class CVReport:
    runs: tuple[RunMetrics, ...]
    mean_precision: float
    mean_recall: float
    mean_f: float
    std_precision: float
    std_recall: float
    std_f: float
    mean_abs_weights: np.ndarray
    fold_weights: np.ndarray  # (features, runs), standardized coordinates
    parts: int
    train_parts: int
    seed: int


def _batched_folds(x: np.ndarray, labels: np.ndarray,
                   train_sets: list[np.ndarray], hyper: HyperParams
                   ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Train every fold simultaneously on the shared raw matrix.

    Standardization is per fold but folded into the weight columns, so
    each epoch costs two matrix products regardless of the fold count.
    Returns (W, B, M, S): scaled-space weights, biases and scaler stats.
    """
    n, p = x.shape
    runs = len(train_sets)
    lam = hyper.regularization
    y = labels * 2.0 - 1.0
    mean = np.empty((p, runs))
    std = np.empty((p, runs))
    n_train = np.empty(runs)
    train_mask = np.zeros((n, runs))
    cw_mat = np.zeros((n, runs))
    for r, rows in enumerate(train_sets):
        sub = x[rows]
        mean[:, r] = sub.mean(axis=0)
        s = sub.std(axis=0)
        std[:, r] = np.where(s <= CONSTANT_STD, 1.0, s)
        n_train[r] = len(rows)
        train_mask[rows, r] = 1.0
        cw_mat[rows, r] = _sample_weights(labels[rows],
                                          hyper.class_weighted)
    w = np.zeros((p, runs))
    b = np.zeros(runs)
    running = np.ones(runs, dtype=bool)
    prev = np.full(runs, np.inf)
    first = True
    tail_from = hyper.epochs // 2 + 1
    w_sum = np.zeros((p, runs))
    b_sum = np.zeros(runs)
    tail_n = 0
    for t in range(1, hyper.epochs + 1):
        v = w / std
        offs = b - (mean * v).sum(axis=0)
        ym = y[:, None] * (x @ v + offs)
        hinge = np.maximum(0.0, 1.0 - ym)
        obj = (0.5 * lam * (w * w).sum(axis=0)
               + (cw_mat * hinge * train_mask).sum(axis=0) / n_train)
        if not first:
            done = np.abs(prev - obj) <= \
                hyper.tolerance * np.maximum(1.0, np.abs(prev))
            running &= ~done
            if not running.any():
                break
        first = False
        prev = obj
        coef = cw_mat * y[:, None] * ((ym < 1.0) & running)
        csum = coef.sum(axis=0)
        grad_w = lam * w - (x.T @ coef - mean * csum) / std / n_train
        eta = 1.0 / (1.0 + lam * t)
        upd = running.astype(np.float64)
        w -= eta * grad_w * upd
        b -= eta * (-csum / n_train) * upd
        if t >= tail_from:
            w_sum += w
            b_sum += b
            tail_n += 1
    if tail_n:
        w = w_sum / tail_n
        b = b_sum / tail_n
    return w, b, mean, std


def cross_validate(dataset: Dataset, hyper: HyperParams | None = None,
                   parts: int = 10, train_parts: int = 7, seed: int = 0,
                   part_ids: list[np.ndarray] | None = None) -> CVReport:
    """Rotating stratified CV; run r trains parts r..r+train_parts-1."""
    hyper = hyper or HyperParams()
    if not 1 <= train_parts < parts:
        raise LearnError("train_parts must be in [1, parts)")
    if part_ids is None:
        part_ids = stratified_parts(dataset.labels, parts, seed)
    x = dataset.matrix
    labels = dataset.labels.astype(np.float64)
    train_sets, test_sets = [], []
    for r in range(parts):
        chosen = {(r + i) % parts for i in range(train_parts)}
        train_sets.append(np.concatenate(
            [part_ids[j] for j in sorted(chosen)]))
        test_sets.append(np.concatenate(
            [part_ids[j] for j in range(parts) if j not in chosen]))
    w, b, mean, std = _batched_folds(x, labels, train_sets, hyper)
    runs = []
    for r, rows in enumerate(test_sets):
        v = w[:, r] / std[:, r]
        margins = x[rows] @ v + (b[r] - mean[:, r] @ v)
        runs.append(abuse_metrics(dataset.labels[rows],
                                  (margins > 0).astype(np.int64)))
    pr = np.array([m.precision for m in runs])
    rc = np.array([m.recall for m in runs])
    fm = np.array([m.f_measure for m in runs])
    return CVReport(tuple(runs), float(pr.mean()), float(rc.mean()),
                    float(fm.mean()), float(pr.std()), float(rc.std()),
                    float(fm.std()), np.abs(w).mean(axis=1), w,
                    parts, train_parts, seed)


# -- recursive feature elimination ----------------------------------------

@dataclass(frozen=True)
class RFEStep:
    n_features: int
    mean_f: float
    dropped: str | None  # feature removed after evaluating this set


@dataclass(frozen=True)
class RFEResult:
    steps: tuple[RFEStep, ...]
    selected: tuple[str, ...]
    baseline_f: float
    threshold: float


def rfe(dataset: Dataset, hyper: HyperParams | None = None,
        retention: float = 0.97, seed: int = 0, parts: int = 10,
        train_parts: int = 7) -> RFEResult:
    """Full elimination descent, then pick the smallest qualifying set."""
    if not 0.0 <= retention <= 1.0:
        raise LearnError("retention must be in [0, 1]")
    part_ids = stratified_parts(dataset.labels, parts, seed)
    names = list(dataset.feature_names)
    matrix = dataset.matrix
    steps: list[RFEStep] = []
    rosters: list[tuple[str, ...]] = []
    while names:
        current = Dataset(matrix, dataset.labels, dataset.message_ids,
                          tuple(names))
        report = cross_validate(current, hyper, parts, train_parts, seed,
                                part_ids=part_ids)
        rosters.append(tuple(names))
        if len(names) == 1:
            steps.append(RFEStep(1, report.mean_f, None))
            break
        drop = int(np.argmin(report.mean_abs_weights))
        steps.append(RFEStep(len(names), report.mean_f, names[drop]))
        del names[drop]
        matrix = np.delete(matrix, drop, axis=1)
    baseline = steps[0].mean_f
    threshold = retention * baseline
    chosen = 0
    for i, step in enumerate(steps):
        if step.mean_f >= threshold:
            chosen = i
    return RFEResult(tuple(steps), rosters[chosen], baseline, threshold)


# -- model file -----------------------------------------------------------

def write_model(model: LinearModel, path) -> None:
    """Key-value text with one scaler/weight line per feature."""
    h = model.hyper
    lines = [
        "linear margin model",
        f"features: {len(model.feature_names)}",
        f"regularization: {h.regularization!r}",
        f"epochs: {h.epochs}",
        f"tolerance: {h.tolerance!r}",
        f"class_weighted: {h.class_weighted}",
        f"seed: {h.seed}",
        f"bias: {model.bias!r}",
        f"final_objective: {model.final_objective!r}",
        "columns (name, mean, std, weight, constant):",
    ]
    for i, name in enumerate(model.feature_names):
        lines.append("\t".join((name, repr(float(model.scaler.mean[i])),
                                repr(float(model.scaler.std[i])),
                                repr(float(model.weights[i])),
                                str(int(model.scaler.constant[i])))))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_model(path) -> LinearModel:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "linear margin model":
        raise LearnError(f"not a model file: {path}")
    head = {}
    body_at = None
    for i, line in enumerate(lines[1:], start=1):
        if line.startswith("columns"):
            body_at = i + 1
            break
        key, _, val = line.partition(": ")
        head[key] = val
    if body_at is None:
        raise LearnError("model file has no column table")
    names, means, stds, weights, consts = [], [], [], [], []
    for line in lines[body_at:]:
        if not line:
            continue
        name, mean, std, weight, const = line.split("\t")
        names.append(name)
        means.append(float(mean))
        stds.append(float(std))
        weights.append(float(weight))
        consts.append(const == "1")
    if len(names) != int(head["features"]):
        raise LearnError("model file feature count mismatch")
    hyper = HyperParams(regularization=float(head["regularization"]),
                        epochs=int(head["epochs"]),
                        tolerance=float(head["tolerance"]),
                        class_weighted=head["class_weighted"] == "True",
                        seed=int(head["seed"]))
    scaler = Scaler(np.array(means), np.array(stds), np.array(consts))
    return LinearModel(np.array(weights), float(head["bias"]), scaler,
                       hyper, float(head["final_objective"]), tuple(names))
