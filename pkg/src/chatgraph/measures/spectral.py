"""Spectral and walk-based centralities.

Dominant directions (eigenvector, HITS, the spectral radius used for
parameter defaults) come from power iteration by repeated squaring with
max-normalization: conversational graphs are frequently acyclic or carry
one-way bridges between equally strong regions, where the plain iteration
degrades to polynomial convergence, while squaring stays geometric in the
number of squarings and lands on the same limit. Alpha/power/pagerank
remain plain fixed-point iterations (their contractions are well
conditioned by construction). Dense eigendecompositions appear only where
the measure itself is defined through one (subgraph centrality).

Directed conventions, used consistently and mirrored by the test oracles:
  * eigenvector / alpha / pagerank / power follow the incoming orientation
    (a vertex is central when central vertices point at it), i.e. the
    iteration matrix is the adjacency transpose;
  * the spectral shift is the maximum edge weight, which makes the
    iteration aperiodic without moving eigenvectors and keeps every
    normalized result invariant under global weight rescaling.

Normalizations: eigenvector/hub/authority max to 1, pagerank sums to 1,
alpha and power are reported raw (power rescaled to ||c||_2 = sqrt(n)).
Graphs with no edges yield all-zero vectors flagged degenerate rather than
errors.
"""

from __future__ import annotations

import numpy as np

from . import _kernels


class ConvergenceError(RuntimeError):
    def __init__(self, what: str, iterations: int):
        super().__init__(
            f"{what} did not converge within {iterations} iterations")
        self.iterations = iterations


def _dominant_direction(m: np.ndarray, tol: float,
                        maxit: int) -> tuple[np.ndarray, int]:
    """Direction of lim_k m^k x0 for nonnegative m, by repeated squaring.

    Iterate j applies m^(2^j) to the uniform start vector; successive
    iterates are compared in max norm. Squaring keeps convergence
    geometric in j even when the top eigenvalue sits in a Jordan block
    (acyclic graphs, one-way bridges), where step-by-step iteration only
    converges like 1/k. Returns (vector, squarings); squarings == maxit+1
    flags failure.
    """
    n = m.shape[0]
    s = np.ascontiguousarray(m, dtype=np.float64)
    mx = s.max()
    if mx <= 0:
        return np.zeros(n), 1
    s = s / mx
    x0 = np.full(n, 1.0 / n)
    prev = x0.copy()
    for it_count in range(1, maxit + 1):
        y = s @ x0
        my = y.max()
        if my <= 0:
            return np.zeros(n), it_count
        y /= my
        diff = float(np.abs(y - prev).max())
        prev = y
        if diff < tol:
            return y, it_count
        s = s @ s
        ms = s.max()
        if ms <= 0:
            # Defective spectrum (acyclic graph): the next power underflowed
            # entirely, so the remaining correction to y is below the
            # smallest representable float. y is the limit direction.
            return prev, it_count
        s /= ms
    return prev, maxit + 1


def lambda_max(adj: np.ndarray, tol: float = 1e-12,
               maxit: int = 10000) -> float:
    """Spectral radius of a nonnegative adjacency: dominant direction of
    the shifted matrix, read out as a Rayleigh quotient of the unshifted
    one. Exact in the limit for every nonnegative matrix, including
    nilpotent ones (radius 0)."""
    n = adj.shape[0]
    if n == 0 or not (adj > 0).any():
        return 0.0
    shift = float(adj.max())
    mt = np.ascontiguousarray(adj.T)
    x, iters = _dominant_direction(mt + shift * np.eye(n), tol, maxit)
    if iters > maxit:
        raise ConvergenceError("spectral radius estimation", maxit)
    denom = float(x @ x)
    if denom == 0.0:
        return 0.0
    return max(0.0, float(x @ (mt @ x)) / denom)


def eigenvector(adj: np.ndarray, tol: float, maxit: int) -> np.ndarray:
    """Principal eigenvector, incoming orientation, max-normalized."""
    n = adj.shape[0]
    if n == 0:
        return np.zeros(0)
    if not (adj > 0).any():
        return np.zeros(n)
    shift = float(adj.max())
    x, iters = _dominant_direction(adj.T + shift * np.eye(n), tol, maxit)
    if iters > maxit:
        raise ConvergenceError("eigenvector centrality", maxit)
    mx = x.max()
    return x / mx if mx > 0 else x


def hits(adj: np.ndarray, tol: float, maxit: int) -> tuple[np.ndarray, np.ndarray]:
    """(hub, authority) scores, each max-normalized.

    The hub vector is the dominant direction of A A^T (symmetric positive
    semidefinite, so no shift is needed); authorities follow as A^T h.
    """
    n = adj.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros(0)
    if not (adj > 0).any():
        return np.zeros(n), np.zeros(n)
    a = np.asarray(adj, dtype=np.float64)
    h, iters = _dominant_direction(a @ a.T, tol, maxit)
    if iters > maxit:
        raise ConvergenceError("HITS", maxit)
    auth = a.T @ h
    ma = auth.max()
    if ma > 0:
        auth = auth / ma
    return h, auth


def alpha_centrality(adj: np.ndarray, attenuation: float | None, tol: float,
                     maxit: int) -> np.ndarray:
    """Solution of x = attenuation * A^T x + 1.

    attenuation None picks 0.5 / lambda_max, or 1.0 on a numerically zero
    spectral radius (the series then terminates on its own).
    """
    n = adj.shape[0]
    if n == 0:
        return np.zeros(0)
    if attenuation is None:
        lam = lambda_max(adj)
        # acyclic graphs report a radius at rounding level, not exactly 0
        attenuation = 0.5 / lam if lam > 1e-6 * float(adj.max()) else 1.0
    m = np.ascontiguousarray(attenuation * adj.T)
    ones = np.ones(n)
    x, iters = _kernels.fixed_point(m, ones, ones, tol, maxit)
    if iters > maxit:
        raise ConvergenceError("alpha centrality", maxit)
    return x


def power_centrality(adj_bin: np.ndarray, exponent: float | None, tol: float,
                     maxit: int) -> np.ndarray:
    """Attenuated-walk centrality c = sum_k beta^k (A^T)^(k+1) 1, rescaled
    to ||c||_2 = sqrt(n); beta defaults to 0.25 / lambda_max."""
    n = adj_bin.shape[0]
    if n == 0:
        return np.zeros(0)
    if exponent is None:
        lam = lambda_max(adj_bin)
        # any actual cycle puts the binary radius at 1 or above
        exponent = 0.25 / lam if lam > 1e-6 else 0.25
    at = np.ascontiguousarray(adj_bin.T)
    b = at @ np.ones(n)
    m = np.ascontiguousarray(exponent * at)
    x, iters = _kernels.fixed_point(m, b, b.copy(), tol, maxit)
    if iters > maxit:
        raise ConvergenceError("power centrality", maxit)
    norm = float(np.sqrt(x @ x))
    if norm == 0.0:
        return np.zeros(n)
    return x * (np.sqrt(n) / norm)


def pagerank(adj: np.ndarray, damping: float, tol: float,
             maxit: int) -> np.ndarray:
    """PageRank with uniform teleport and uniform dangling redistribution,
    normalized to sum 1."""
    n = adj.shape[0]
    if n == 0:
        return np.zeros(0)
    s = adj.sum(axis=1)
    dangling = (s <= 0).astype(np.float64)
    p = np.zeros_like(adj)
    nz = s > 0
    p[nz] = adj[nz] / s[nz, None]
    x, iters = _kernels.pagerank_iterate(np.ascontiguousarray(p), dangling,
                                         damping, tol, maxit)
    if iters > maxit:
        raise ConvergenceError("pagerank", maxit)
    return x


def subgraph_centrality(adj_sym_bin: np.ndarray) -> np.ndarray:
    """Diagonal of exp(A) through the spectral form of the symmetric
    unweighted adjacency."""
    n = adj_sym_bin.shape[0]
    if n == 0:
        return np.zeros(0)
    vals, vecs = np.linalg.eigh(adj_sym_bin)
    return (vecs ** 2) @ np.exp(vals)
