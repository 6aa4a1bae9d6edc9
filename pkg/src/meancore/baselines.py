"""Sampling baselines the constructions are benchmarked against.

All three return importance-weighted sparse reweightings: duplicates of
an index are merged by summing their shares, and each estimator is
unbiased for the weighted point sum of its input.
"""

import numpy as np

from .core import SparseWeights, WeightedSet
from .linalg import svd


def uniform_sample(s, size, seed):
    """Uniform sample of ``size`` indices, each carrying an equal share.

    Every draw contributes ``total_weight / size``, so the output's
    total matches the input's exactly.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, s.n, size=size)
    share = np.full(size, s.total_weight / size)
    return SparseWeights.accumulate(draws, share)


def sensitivity_sample_sum(s, size, seed):
    """Norm-proportional importance sample.

    Index ``i`` is scored ``1/n + |q_i|^2 / sum_j |q_j|^2`` and drawn
    with probability proportional to its score; each draw carries
    ``m_i * total_score / (size * score_i)`` so the estimator stays
    unbiased for the weighted sum.  An all-zero point set has no norm
    signal and falls back to uniform sampling.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    sq = np.einsum("ij,ij->i", s.points, s.points)
    total_sq = float(np.sum(sq))
    if total_sq <= 0.0:
        return uniform_sample(s, size, seed)
    scores = 1.0 / s.n + sq / total_sq
    total_score = float(np.sum(scores))
    rng = np.random.default_rng(seed)
    draws = rng.choice(s.n, size=size, p=scores / total_score)
    shares = s.weights[draws] * total_score / (size * scores[draws])
    return SparseWeights.accumulate(draws, shares)


def sensitivity_sample_svd(a, k, size, seed):
    """Leverage-score sample for rank-``k`` projection costs.

    The rows of ``a`` are projected onto their own top ``k`` right
    singular directions and scored by the squared row norms of the left
    factor of the projected matrix.  If ``a`` has rank below ``k``, the
    available rank is used instead; a zero matrix falls back to uniform
    over rows.
    """
    a = np.asarray(a, dtype=float)
    if size < 1:
        raise ValueError("size must be at least 1")
    n = a.shape[0]
    factors = svd(a)
    tol = float(factors.s[0]) * 1e-12 if factors.s.size else 0.0
    rank = int(np.sum(factors.s > tol))
    r = min(k, rank)
    if r == 0:
        return uniform_sample(WeightedSet(a), size, seed)
    vk = factors.V[:, :r]
    projected = a @ vk @ vk.T
    pf = svd(projected)
    keep = pf.s > tol
    scores = np.einsum("ij,ij->i", pf.U[:, keep], pf.U[:, keep])
    total_score = float(np.sum(scores))
    rng = np.random.default_rng(seed)
    draws = rng.choice(n, size=size, p=scores / total_score)
    shares = total_score / (size * scores[draws])
    return SparseWeights.accumulate(draws, shares)
