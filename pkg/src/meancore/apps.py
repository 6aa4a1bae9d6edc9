"""Applications of the mean-preserving constructions.

Three problems reduce to matching a weighted mean: summarizing squared
Euclidean costs to a candidate center (1-mean), summarizing kernel
density estimates through a feature map, and preserving projection
costs onto low-dimensional subspaces through quadratic features.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import SparseWeights, WeightedSet, normalize
from .coresets import coreset, coreset_rows
from .linalg import svd
from .rows import BlockRows

# ---------------------------------------------------------------------------
# 1-mean


def one_mean_coreset(s, eps, mode="auto"):
    """Sparse reweighting preserving all squared-distance sums.

    For every center ``x`` the weighted 1-mean cost of the output stays
    within a factor ``1 +- eps`` of the input's.  Achieved by requesting
    mean preservation at the much tighter level ``(eps / 4)^2``; the
    support can therefore reach ``2048 / eps^2``.
    """
    return coreset(s, (eps / 4.0) ** 2, mode)


def one_mean_cost(s, x, weights=None):
    """Weighted sum of squared distances from the points of ``s`` to ``x``.

    ``weights`` defaults to the set's own; a SparseWeights evaluates the
    cost of a summary instead.
    """
    x = np.asarray(x, dtype=float)
    if weights is None:
        w, pts = s.weights, s.points
    elif isinstance(weights, SparseWeights):
        w, pts = weights.weights, s.points[weights.indices]
    else:
        w, pts = np.asarray(weights, dtype=float), s.points
    diff = pts - x
    return float(w @ np.einsum("ij,ij->i", diff, diff))


def one_mean_certificates(s, u):
    """The three normalized-coordinate sums a 1-mean summary must pin down.

    Returns ``(|sum u~ p|, |1 - sum u~|, |1 - sum u~ |p|^2|)`` where
    ``p`` are the normalized points of ``s`` and ``u~`` is ``u`` over
    the input's total weight.  Each must be small for the cost of every
    center to be preserved.
    """
    ns, transform = normalize(s)
    ut = u.weights / transform.total_weight
    p = ns.points[u.indices]
    c1 = float(np.linalg.norm(ut @ p))
    c2 = abs(1.0 - float(np.sum(ut)))
    c3 = abs(1.0 - float(ut @ np.einsum("ij,ij->i", p, p)))
    return c1, c2, c3


# ---------------------------------------------------------------------------
# Kernel density estimates


class IdentityFeatures:
    """Feature map that hands points through unchanged."""

    def __call__(self, points):
        return np.asarray(points, dtype=float)


class GaussianRandomFeatures:
    """Random Fourier features for the Gaussian kernel.

    Maps a point to ``sqrt(1/m) * (cos(W q), sin(W q))`` with the ``m``
    rows of ``W`` drawn from ``N(0, I / bandwidth^2)``.  Pairing cosine
    with sine makes every feature vector exactly unit norm, and the
    induced kernel ``phi(x) . phi(y)`` approximates
    ``exp(-|x - y|^2 / (2 bandwidth^2))``.

    Parameters
    ----------
    in_dim : int
    out_dim : int
        Total feature count, even; ``out_dim / 2`` frequency rows.
    bandwidth : float
    seed : int
    """

    def __init__(self, in_dim, out_dim, bandwidth, seed):
        if out_dim < 2 or out_dim % 2 != 0:
            raise ValueError("out_dim must be an even integer >= 2")
        if bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        rng = np.random.default_rng(seed)
        self.pairs = out_dim // 2
        self.freqs = rng.standard_normal((self.pairs, in_dim)) / bandwidth

    def __call__(self, points):
        z = np.asarray(points, dtype=float) @ self.freqs.T
        out = np.concatenate([np.cos(z), np.sin(z)], axis=1)
        out *= math.sqrt(1.0 / self.pairs)
        return out


def mean_embedding(points, feature_map, weights=None):
    """Weighted average of the feature vectors, weights normalized to one."""
    feats = feature_map(points)
    if weights is None:
        return feats.mean(axis=0)
    if isinstance(weights, SparseWeights):
        return (weights.weights / weights.total) @ feats[weights.indices]
    w = np.asarray(weights, dtype=float)
    return (w / w.sum()) @ feats


def kernel_density(points, queries, feature_map, weights=None):
    """Density estimate at each query under the feature map's kernel.

    Evaluates ``sum_i w~_i k(q_i, x)`` with ``k(a, b) = phi(a) . phi(b)``
    and normalized weights, which is just the mean embedding applied to
    each query's features.
    """
    emb = mean_embedding(points, feature_map, weights)
    return feature_map(queries) @ emb


def kde_coreset(points, eps, feature_map=None, mode="auto"):
    """Subset weighting whose kernel density estimate tracks the input's.

    Builds a mean-preserving coreset of the feature vectors at level
    ``eps^2``; since every feature vector has norm at most one, the KDE
    deviation at any query is bounded by the distance between the two
    mean embeddings, itself at most ``eps`` times the feature spread.
    The default feature map is the identity.
    """
    feature_map = feature_map or IdentityFeatures()
    mapped = WeightedSet(feature_map(points))
    return coreset(mapped, eps * eps, mode)


# ---------------------------------------------------------------------------
# Projection-cost preservation (k-SVD / PCA)


@dataclass(frozen=True)
class DimSummary:
    """Row weights preserving squared projection costs.

    ``weights`` is dense over the input rows; scaling row ``i`` of the
    (shifted) matrix by ``sqrt(weights[i])`` preserves the squared
    distance sum to every affine subspace of the target dimension within
    the guaranteed factor.  ``exact`` marks inputs whose spectral tail
    vanishes, where the rows are kept as they are.
    """

    weights: np.ndarray
    r: float
    exact: bool

    @property
    def nnz(self):
        return int(np.count_nonzero(self.weights))

    def sqrt_weights(self):
        return np.sqrt(self.weights)


def dim_coreset(a, k, eps, mode="auto", memory_budget=2 << 30):
    """Row reweighting preserving costs of rank-``k`` approximations.

    For every shift vector and every orthonormal basis of a
    ``(d - k)``-dimensional test subspace, the weighted squared
    projection cost stays within a small multiple of ``eps`` of the
    unweighted one.

    The rows are scaled to the unit ball, padded with a large constant
    column ``r`` that encodes shifts, factored, and re-expressed so the
    spectral tail is isolated; a mean-preserving coreset of the outer
    products of those rows at level ``(eps / 5k)^2`` yields the weights.
    When the tail is numerically zero the input already has rank at most
    ``k`` and unit weights are returned, flagged exact.

    Parameters
    ----------
    a : array, shape (n, d), with n >= d + 1
    k : int, target rank, 1 <= k <= d
    eps : float in (0, 1/2)
    mode : solver mode for the inner construction
    memory_budget : int
        Byte budget above which the n x d^2 feature rows are generated
        blockwise instead of materialized.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    n, d = a.shape
    if n < d + 1:
        raise ValueError("need at least d + 1 rows")
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= {d}, got {k}")
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")

    norms = np.sqrt(np.einsum("ij,ij->i", a, a))
    top = float(norms.max())
    if top <= 0.0:
        return DimSummary(np.ones(n), 1.0, True)
    scaled = a / top
    r = 1.0 + 4.0 / eps**4
    padded = np.concatenate([scaled, np.full((n, 1), r)], axis=1)
    factors = svd(padded)
    tail = factors.s[k:d]
    tail_norm = float(np.linalg.norm(tail))
    if tail_norm <= 1e-12 * r * r:
        return DimSummary(np.ones(n), r, True)
    v_rows = np.concatenate(
        [factors.U[:, :k], factors.U[:, k:d] * (tail / tail_norm)], axis=1
    )

    def feature_block(start, stop):
        blk = v_rows[start:stop]
        return np.einsum("ij,ik->ijk", blk, blk).reshape(stop - start, d * d)

    feats = BlockRows(n, d * d, feature_block)
    u = coreset_rows(feats, (eps / (5.0 * k)) ** 2, mode, memory_budget=memory_budget)
    return DimSummary(u.to_dense(n), r, False)


def subspace_cost(a, ell, x, weights=None):
    """Weighted squared projection cost ``sum_i w_i |(a_i - ell) X|^2``.

    ``x`` must have orthonormal columns spanning the directions the cost
    is measured along; ``ell`` is the affine shift.  Unit weights by
    default.
    """
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    gram_gap = x.T @ x - np.eye(x.shape[1])
    if float(np.abs(gram_gap).max()) > 1e-8:
        raise ValueError("x must have orthonormal columns")
    proj = (a - np.asarray(ell, dtype=float)) @ x
    sq = np.einsum("ij,ij->i", proj, proj)
    if weights is None:
        return float(np.sum(sq))
    return float(np.asarray(weights, dtype=float) @ sq)
