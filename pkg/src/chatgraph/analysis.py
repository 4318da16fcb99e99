"""Feature-dependence study: correlations and hierarchical clustering.

Association strength is what matters here, so features are clustered on
the distance 1 - |r| with average linkage, and the cut is chosen by the
mean silhouette over every candidate cluster count in [2, p - 1], ties
resolved toward fewer clusters.  Constant features correlate 0 with
everything by convention and end up maximally distant from all others.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import squareform

from .features import Dataset
from .learning import CONSTANT_STD


class AnalysisError(ValueError):
    pass


def constant_features(dataset: Dataset) -> tuple[str, ...]:
    """Names of features with population std <= 1e-15, catalog order."""
    std = dataset.matrix.std(axis=0)
    return tuple(np.array(dataset.feature_names)[std <= CONSTANT_STD])


def pearson_matrix(dataset: Dataset) -> np.ndarray:
    """Symmetric correlation matrix with unit diagonal.

    Constant features get r = 0 against everything (their diagonal stays
    1); the result is explicitly symmetrized and clipped to [-1, 1].
    """
    x = dataset.matrix
    if x.shape[0] < 2:
        raise AnalysisError("correlation needs at least 2 rows")
    std = x.std(axis=0)
    keep = std > CONSTANT_STD
    centered = x - x.mean(axis=0)
    denom = np.where(keep, std, 1.0) * x.shape[0]
    corr = (centered.T @ centered) / np.outer(denom, denom / x.shape[0])
    corr[~keep, :] = 0.0
    corr[:, ~keep] = 0.0
    corr = np.clip((corr + corr.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def mean_silhouette(dist: np.ndarray, labels: np.ndarray) -> float:
    """Hand-rolled silhouette on a precomputed distance matrix.

    Singleton clusters contribute 0; a zero max(a, b) also scores 0.
    """
    labels = np.asarray(labels)
    uniq = np.unique(labels)
    if len(uniq) < 2:
        raise AnalysisError("silhouette needs at least 2 clusters")
    n = len(labels)
    scores = np.zeros(n)
    members = {c: np.flatnonzero(labels == c) for c in uniq}
    for i in range(n):
        own = members[labels[i]]
        if len(own) == 1:
            continue
        a = dist[i, own[own != i]].mean()
        b = min(dist[i, members[c]].mean() for c in uniq if c != labels[i])
        top = max(a, b)
        scores[i] = 0.0 if top == 0 else (b - a) / top
    return float(scores.mean())


def _contiguous(labels: np.ndarray) -> np.ndarray:
    seen: dict[int, int] = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, c in enumerate(labels):
        out[i] = seen.setdefault(int(c), len(seen))
    return out


@dataclass(frozen=True)
class ClusterCut:
    k: int
    labels: np.ndarray  # contiguous ids in first-occurrence order
    mean_silhouette: float
    by_k: tuple[tuple[int, float], ...]
    linkage_matrix: np.ndarray


def cluster_features(corr: np.ndarray) -> ClusterCut:
    """Average-linkage dendrogram of 1 - |r| cut at the silhouette peak."""
    corr = np.asarray(corr, dtype=np.float64)
    p = corr.shape[0]
    if corr.ndim != 2 or corr.shape[1] != p:
        raise AnalysisError("correlation matrix must be square")
    if p < 3:
        raise AnalysisError("clustering needs at least 3 features")
    dist = 1.0 - np.abs(corr)
    np.fill_diagonal(dist, 0.0)
    z = linkage(squareform(dist, checks=False), method="average")
    best = None
    by_k = []
    for k in range(2, p):
        cut = fcluster(z, t=k, criterion="maxclust")
        if len(np.unique(cut)) < 2:
            continue
        score = mean_silhouette(dist, cut)
        by_k.append((k, score))
        if best is None or score > best[1]:
            best = (k, score, cut)
    if best is None:
        raise AnalysisError("no cut produced 2 or more clusters")
    k, score, cut = best
    return ClusterCut(k, _contiguous(cut), score, tuple(by_k), z)


def local_optimality_witness(cut: ClusterCut) -> str:
    """One line stating the chosen k beats (or ties) its neighbors."""
    scores = dict(cut.by_k)
    parts = [f"s(k={cut.k}) = {cut.mean_silhouette:.6f}"]
    for nb in (cut.k - 1, cut.k + 1):
        if nb in scores:
            rel = ">=" if cut.mean_silhouette >= scores[nb] else "<"
            parts.append(f"{rel} s(k={nb}) = {scores[nb]:.6f}")
        else:
            parts.append(f"k={nb} outside candidate range")
    return "; ".join(parts)


def render_cluster_report(names, corr: np.ndarray, cut: ClusterCut) -> str:
    """One block per cluster with members and mean within-cluster |r|."""
    names = list(names)
    lines = [
        "feature clusters (average linkage on 1 - |r|)",
        f"features: {len(names)}; chosen cut: {cut.k} clusters;"
        f" mean silhouette: {cut.mean_silhouette:.6f}",
        f"local optimum: {local_optimality_witness(cut)}",
        "silhouette by cluster count:",
    ]
    lines.extend(f"  k={k}: {s:.6f}" for k, s in cut.by_k)
    absr = np.abs(corr)
    for c in range(cut.k):
        idx = np.flatnonzero(cut.labels == c)
        if len(idx) > 1:
            pairs = absr[np.ix_(idx, idx)]
            within = (pairs.sum() - len(idx)) / (len(idx) * (len(idx) - 1))
            mean_txt = f"{within:.4f}"
        else:
            mean_txt = "-"
        lines.append(f"cluster {c} (size {len(idx)},"
                     f" mean within-cluster |r| {mean_txt}):")
        lines.extend(f"  {names[i]}" for i in idx)
    return "\n".join(lines) + "\n"
