"""Weighted point sets, normalization, lifting, and sparse reweightings.

The constructions in this package summarize a weighted set by a sparse
nonnegative reweighting of its own points so that the weighted mean is
preserved.  Quality is always measured in normalized coordinates: the
squared distance between the original and the summary mean, relative to
the weighted variance of the input.  This module holds the data types and
the coordinate transforms everything else is built on.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVariance

# Relative tolerance for the algebraic identities of normalized sets
# (weights sum to one, mean at the origin, unit weighted variance).
TAU_NORM = 1e-9


def _readonly(a, dtype):
    out = np.array(a, dtype=dtype, order="C", copy=True)
    out.setflags(write=False)
    return out


def degenerate_tolerance(points):
    """Variance threshold below which a point set counts as a single point.

    Scales with the squared magnitude of the largest coordinate so the
    test is invariant to the units of the input.
    """
    m = float(np.max(np.abs(points))) if points.size else 0.0
    return 1e-12 * m * m


class WeightedSet:
    """A finite set of points in R^d with positive multiplicities.

    Parameters
    ----------
    points : array_like, shape (n, d)
        One point per row.
    weights : array_like, shape (n,), optional
        Positive multiplicities.  Defaults to all ones.
    drop_nonpositive : bool, optional
        If True, rows with weight <= 0 are silently dropped instead of
        rejected.  At least one positive weight must remain.
    """

    def __init__(self, points, weights=None, drop_nonpositive=False):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2:
            raise ValueError("points must be a 2-D array, one point per row")
        n, d = points.shape
        if n < 1 or d < 1:
            raise ValueError("need at least one point and one coordinate")
        if not np.all(np.isfinite(points)):
            raise ValueError("points contain non-finite values")
        if weights is None:
            weights = np.ones(n)
        weights = np.asarray(weights, dtype=float)
        if weights.shape != (n,):
            raise ValueError("weights must be a vector matching the point count")
        if not np.all(np.isfinite(weights)):
            raise ValueError("weights contain non-finite values")
        if drop_nonpositive:
            keep = weights > 0.0
            if not np.any(keep):
                raise ValueError("no positive weights remain")
            points, weights = points[keep], weights[keep]
        elif np.any(weights <= 0.0):
            raise ValueError("weights must be strictly positive")
        self.points = _readonly(points, float)
        self.weights = _readonly(weights, float)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def total_weight(self):
        """Sum of the multiplicities (their 1-norm, as all are positive)."""
        return float(np.sum(self.weights))

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class NormalizationTransform:
    """The affine map taking original to normalized coordinates.

    ``p = (q - mu) / sigma`` per point; ``total_weight`` restores the
    weight scale when mapping sparse reweightings back.
    """

    mu: np.ndarray
    sigma: float
    total_weight: float

    def apply(self, points):
        return (np.asarray(points, dtype=float) - self.mu) / self.sigma

    def restore(self, points):
        return np.asarray(points, dtype=float) * self.sigma + self.mu


class NormalizedWeightedSet:
    """A weighted set whose weights form a distribution, whose weighted
    mean is the origin, and whose weighted variance is one.

    Construction checks the three identities up to ``TAU_NORM``.
    """

    def __init__(self, points, weights):
        points = np.asarray(points, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if points.ndim != 2 or weights.shape != (points.shape[0],):
            raise ValueError("points must be (n, d) with one weight per row")
        total = float(np.sum(weights))
        if abs(total - 1.0) > TAU_NORM:
            raise ValueError(f"weights sum to {total}, expected 1")
        mean = weights @ points
        if float(np.linalg.norm(mean)) > TAU_NORM:
            raise ValueError("weighted mean is not at the origin")
        second = float(weights @ np.einsum("ij,ij->i", points, points))
        if abs(second - 1.0) > TAU_NORM:
            raise ValueError(f"weighted variance is {second}, expected 1")
        self.points = _readonly(points, float)
        self.weights = _readonly(weights, float)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


@dataclass(frozen=True)
class LiftedSet:
    """Image of a normalized set under the lifting map.

    Every lifted point lies in the unit ball of R^(d+1) and the lifted
    weights again form a distribution.  ``scale`` keeps the per-point
    factor ``|p_i|^2 + 1`` so weights can be mapped back exactly.
    """

    points: np.ndarray
    weights: np.ndarray
    scale: np.ndarray

    @property
    def n(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class SparseWeights:
    """A sparse nonnegative reweighting, sorted by index.

    ``indices`` are strictly increasing positions into the set the
    weights refer to; ``weights`` are the corresponding positive values.
    """

    indices: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        w = np.asarray(self.weights, dtype=float)
        if idx.ndim != 1 or w.shape != idx.shape:
            raise ValueError("indices and weights must be matching vectors")
        if idx.size == 0:
            raise ValueError("a reweighting must have at least one entry")
        if np.any(np.diff(idx) <= 0):
            raise ValueError("indices must be strictly increasing")
        if np.any(idx < 0):
            raise ValueError("indices must be nonnegative")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("weights must be finite and strictly positive")
        object.__setattr__(self, "indices", _readonly(idx, np.int64))
        object.__setattr__(self, "weights", _readonly(w, float))

    @classmethod
    def accumulate(cls, indices, weights):
        """Build from possibly repeated indices, summing duplicate weights."""
        idx = np.asarray(indices, dtype=np.int64)
        w = np.asarray(weights, dtype=float)
        uniq, inverse = np.unique(idx, return_inverse=True)
        summed = np.zeros(uniq.size)
        np.add.at(summed, inverse, w)
        return cls(uniq, summed)

    @classmethod
    def from_dense(cls, dense):
        dense = np.asarray(dense, dtype=float)
        idx = np.flatnonzero(dense > 0.0)
        return cls(idx, dense[idx])

    @property
    def nnz(self):
        return int(self.indices.size)

    @property
    def total(self):
        return float(np.sum(self.weights))

    def to_dense(self, n):
        out = np.zeros(n)
        out[self.indices] = self.weights
        return out

    def mean_of(self, points):
        """Weighted mean of ``points`` restricted to the support."""
        return (self.weights / self.total) @ np.asarray(points)[self.indices]


def weighted_mean(s):
    """Mean of ``s.points`` under the weight distribution of ``s``."""
    return (s.weights / s.total_weight) @ s.points


def weighted_variance(s):
    """Mean squared distance of the points from the weighted mean."""
    mu = weighted_mean(s)
    sq = np.einsum("ij,ij->i", s.points - mu, s.points - mu)
    return float((s.weights / s.total_weight) @ sq)


def normalize(s):
    """Translate and scale a weighted set into canonical position.

    Returns
    -------
    (NormalizedWeightedSet, NormalizationTransform)
        The normalized set and the transform that undoes it.

    Raises
    ------
    DegenerateVariance
        If the weighted standard deviation vanishes relative to the
        coordinate magnitude, i.e. all points effectively coincide.
    """
    w = s.weights / s.total_weight
    mu = w @ s.points
    p = s.points - mu
    sigma = float(np.sqrt(w @ np.einsum("ij,ij->i", p, p)))
    if sigma <= degenerate_tolerance(s.points):
        raise DegenerateVariance("all points coincide up to tolerance")
    p /= sigma
    transform = NormalizationTransform(_readonly(mu, float), sigma, s.total_weight)
    return NormalizedWeightedSet(p, w), transform


def lift(ns):
    """Map a normalized set into the unit ball one dimension up.

    Each point gains a constant coordinate 1 and is divided by
    ``|p|^2 + 1``; its weight is multiplied by ``(|p|^2 + 1) / 2``.  The
    lifted weights again sum to one, and a sparse distribution over the
    lifted set pulls back to a mean-preserving reweighting of the
    original set through :func:`unlift_weights`.
    """
    sq = np.einsum("ij,ij->i", ns.points, ns.points)
    scale = sq + 1.0
    lifted = np.empty((ns.n, ns.dim + 1))
    lifted[:, : ns.dim] = ns.points
    lifted[:, ns.dim] = 1.0
    lifted /= scale[:, None]
    w = ns.weights * scale / 2.0
    return LiftedSet(_readonly(lifted, float), _readonly(w, float), _readonly(scale, float))


def unlift_weights(u_lifted, lifted, total_weight):
    """Pull a sparse distribution on a lifted set back to the input scale.

    ``u_i = total_weight * 2 u'_i / (|p_i|^2 + 1)`` on the same support.
    """
    scale = lifted.scale[u_lifted.indices]
    return SparseWeights(u_lifted.indices, total_weight * 2.0 * u_lifted.weights / scale)


def summarization_error(s, u):
    """Normalized squared mean deviation of a reweighting.

    Computes ``|mean_u - mean_m|^2 / variance_m`` where ``mean_u`` uses
    the sparse weights ``u`` and ``mean_m`` and ``variance_m`` use the
    original multiplicities.  A value of at most ``eps`` is what every
    construction here promises.

    Returns 0 for a degenerate input whose summary is exact; raises
    DegenerateVariance if the variance vanishes but the means disagree.
    """
    mu = weighted_mean(s)
    var = weighted_variance(s)
    mu_u = u.mean_of(s.points)
    num = float(np.sum((mu_u - mu) ** 2))
    tau = degenerate_tolerance(s.points)
    if var <= tau * tau:
        if num <= 1e-18 * (1.0 + float(mu @ mu)):
            return 0.0
        raise DegenerateVariance("zero variance but the summary mean deviates")
    return num / var
