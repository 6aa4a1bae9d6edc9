"""Mean-preserving coreset constructions.

``coreset`` is the deterministic construction: normalize, lift into the
unit ball, run the simplex solver at a tightened error, and pull the
sparse weights back.  ``fast_coreset`` is the recursive booster that
reaches the same kind of guarantee in near-linear time by solving small
mean problems over clustered parts.  ``prob_coreset`` is the randomized
variant built on medians of group means.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import SparseWeights, lift, normalize, unlift_weights, weighted_mean
from .errors import DegenerateVariance
from .frankwolfe import FwProblem, fw_solve, iterations_for_error
from .rows import BlockRows, as_rows

# Internal tightening of the requested error inside the lifted pipeline.
PIPELINE_SHRINK = 16.0

# Auto mode switches to the booster once n * eps clears this many
# squared-log factors.
AUTO_THRESHOLD = 64.0


def partition(n, k):
    """Boundaries of ``min(k, n)`` contiguous, balanced parts of ``range(n)``.

    Returns an int array ``b`` of length ``parts + 1`` with ``b[0] = 0``
    and ``b[-1] = n``; part ``j`` is ``range(b[j], b[j+1])``.  Sizes
    differ by at most one and never exceed ``ceil(n / k)``.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    k = min(k, n)
    base, extra = divmod(n, k)
    sizes = np.full(k, base, dtype=np.int64)
    sizes[:extra] += 1
    return np.concatenate(([0], np.cumsum(sizes)))


def _check_eps(eps):
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def _auto_mode(n, eps):
    """Pick the booster once the input is large relative to the accuracy."""
    return "fast" if n * eps > AUTO_THRESHOLD * math.log2(max(n, 2)) ** 2 else "slow"


def approximate_distribution(points, weights, eps, mode="slow"):
    """Sparse distribution over unit-ball points matching a target mean.

    Returns sparse ``u`` on the simplex with squared residual
    ``|sum_i (w_i - u_i) p_i|^2`` at most ``eps`` (``2 * eps`` for the
    booster).  ``points`` may be a dense array or a row adapter.
    """
    rows = as_rows(points)
    if mode == "auto":
        mode = _auto_mode(rows.n, eps)
    if mode == "slow":
        problem = FwProblem(rows, weights, iterations_for_error(eps))
        return fw_solve(problem, stop_below=0.01 * eps)
    if mode == "fast":
        return fast_coreset(rows, weights, eps)
    raise ValueError(f"unknown mode {mode!r}")


def coreset(s, eps, mode="auto"):
    """Sparse mean-preserving reweighting of a weighted set.

    Parameters
    ----------
    s : WeightedSet
    eps : float
        Target for the normalized squared mean deviation, in (0, 1).
    mode : {"auto", "slow", "fast"}
        "slow" runs the solver on the full lifted set and keeps the
        support below ``16 * 8 / eps``.  "fast" uses the recursive
        booster, which doubles the error guarantee.  "auto" picks the
        booster once ``n * eps`` dominates ``64 * log2(n)^2``.

    Returns
    -------
    SparseWeights
        Nonnegative weights on a subset of the input indices whose
        weighted mean deviates from the input mean by at most
        ``eps * variance`` (``2 eps`` in fast mode), measured as
        normalized squared distance.  The weight total stays within
        ``2 sqrt(eps / 16)`` of the input's, relatively.

    Notes
    -----
    A set whose points all coincide has no variance to measure against;
    it is summarized exactly by one point carrying the full weight.
    """
    _check_eps(eps)
    try:
        ns, transform = normalize(s)
    except DegenerateVariance:
        mu = weighted_mean(s)
        gaps = np.einsum("ij,ij->i", s.points - mu, s.points - mu)
        j = int(np.argmin(gaps))
        return SparseWeights([j], [s.total_weight])
    eps_inner = eps / PIPELINE_SHRINK
    n = ns.n
    if mode == "auto":
        mode = _auto_mode(n, eps)
    if mode not in ("slow", "fast"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "slow":
        lifted = lift(ns)
        u_lifted = approximate_distribution(lifted.points, lifted.weights, eps_inner, mode)
        return unlift_weights(u_lifted, lifted, transform.total_weight)
    # the booster only sweeps the lifted rows blockwise, so they are
    # generated on the fly instead of materialized
    d = ns.dim
    scale = np.einsum("ij,ij->i", ns.points, ns.points) + 1.0
    w_lift = ns.weights * scale / 2.0

    def lifted_block(start, stop):
        out = np.empty((stop - start, d + 1))
        out[:, :d] = ns.points[start:stop]
        out[:, d] = 1.0
        out /= scale[start:stop, None]
        return out

    # the lift scale cancels inside weighted sums over lifted rows:
    # w * (p|1)/scale = (w/scale) * (p|1), so part sums need only one
    # pass over the normalized points
    plain = as_rows(ns.points)

    def lifted_segment_sums(boundaries, w):
        wr = w / scale
        out = np.empty((boundaries.size - 1, d + 1))
        out[:, :d] = plain.segment_weighted_sums(boundaries, wr)
        out[:, d] = np.add.reduceat(wr, boundaries[:-1])
        return out

    source = BlockRows(n, d + 1, lifted_block, segment_fn=lifted_segment_sums)
    u_lifted = fast_coreset(source, w_lift, eps_inner)
    pulled = transform.total_weight * 2.0 * u_lifted.weights / scale[u_lifted.indices]
    return SparseWeights(u_lifted.indices, pulled)


def coreset_rows(rows, eps, mode="auto", memory_budget=2 << 30):
    """Coreset of unit-multiplicity rows served through a row adapter.

    Same pipeline as :func:`coreset` for a set with all weights one, but
    the input rows are only ever touched in blocks, so a generator-backed
    adapter works for feature matrices too large to hold.  The lifted
    matrix is materialized only while it fits ``memory_budget`` bytes;
    beyond that every solver pass regenerates it blockwise.

    Returns SparseWeights with total near ``rows.n``.
    """
    _check_eps(eps)
    rows = as_rows(rows)
    n, d = rows.n, rows.dim
    mu = rows.weighted_sum(np.full(n, 1.0 / n))
    sq_dists = rows.sq_dists_to(mu)
    var = float(np.mean(sq_dists))
    largest = math.sqrt(float(np.max(rows.sq_norms()))) if n else 0.0
    tau = 1e-12 * largest * largest
    sigma = math.sqrt(var)
    if sigma <= tau:
        j = int(np.argmin(sq_dists))
        return SparseWeights([j], [float(n)])
    scale = sq_dists / (sigma * sigma) + 1.0
    w_lift = scale / (2.0 * n)

    def lifted_block(start, stop):
        blk = (rows.slab(start, stop) - mu) / sigma
        out = np.empty((stop - start, d + 1))
        out[:, :d] = blk
        out[:, d] = 1.0
        out /= scale[start:stop, None]
        return out

    if n * (d + 1) * 8 <= memory_budget:
        lifted = as_rows(np.concatenate([lifted_block(a, b) for a, b in _spans(n, d + 1)]))
    else:
        lifted = BlockRows(n, d + 1, lifted_block)
    if mode == "auto":
        mode = _auto_mode(n, eps)
    u_lift = approximate_distribution(lifted, w_lift, eps / PIPELINE_SHRINK, mode)
    pulled = float(n) * 2.0 * u_lift.weights / scale[u_lift.indices]
    return SparseWeights(u_lift.indices, pulled)


def _spans(n, dim):
    step = max(1, (4 << 20) // (8 * dim))
    return [(a, min(a + step, n)) for a in range(0, n, step)]


def fast_coreset(points, weights, eps):
    """Recursive booster for the unit-ball mean-matching problem.

    Splits the points into ``k = ceil(2 log2(n) / eps)`` contiguous
    parts, solves the ``k``-point problem over the part means at error
    ``eps / log2(n)``, keeps only the parts the solution touches with
    weights spread proportionally inside each part, and repeats until at
    most ``k`` points remain.  The final direct solve runs at ``eps``,
    so the returned support stays below ``8 / eps`` while the squared
    residual against the original target mean is at most ``2 * eps``.

    Returns sparse weights indexed into ``points``.
    """
    _check_eps(eps)
    rows = as_rows(points)
    weights = np.asarray(weights, dtype=float)
    n0 = rows.n
    if n0 == 1:
        return SparseWeights([0], [1.0])
    depth = math.log2(n0)
    k = math.ceil(2.0 * depth / eps)
    eps_level = eps / depth
    iters_level = iterations_for_error(eps_level)

    cur_idx = np.arange(n0, dtype=np.int64)
    cur_w = weights
    cur_rows = rows
    while cur_idx.size > k:
        bounds = partition(cur_idx.size, k)
        part_w = np.add.reduceat(cur_w, bounds[:-1])
        part_means = cur_rows.segment_weighted_sums(bounds, cur_w) / part_w[:, None]
        picked = fw_solve(
            FwProblem(part_means, part_w, iters_level),
            stop_below=0.01 * eps_level,
        )
        local = np.concatenate(
            [np.arange(bounds[j], bounds[j + 1]) for j in picked.indices]
        )
        spread = np.concatenate(
            [
                uj * cur_w[bounds[j] : bounds[j + 1]] / part_w[j]
                for j, uj in zip(picked.indices, picked.weights)
            ]
        )
        if local.size >= cur_idx.size:
            # no shrinkage; finish directly on what we have
            break
        cur_idx = cur_idx[local]
        cur_w = spread
        cur_rows = as_rows(cur_rows.take(local))

    if isinstance(cur_rows, BlockRows):
        # the direct solve sweeps the rows once per iteration; a base
        # case this small is cheaper materialized
        cur_rows = as_rows(cur_rows.take(np.arange(cur_idx.size)))
    final = fw_solve(
        FwProblem(cur_rows, cur_w, iterations_for_error(eps)),
        stop_below=0.01 * eps,
    )
    return SparseWeights(cur_idx[final.indices], final.weights)


@dataclass(frozen=True)
class ProbSummary:
    """Index multiset chosen by the randomized construction.

    ``indices`` lists the selected group's draws in draw order,
    duplicates included.  ``exact`` marks the fallback where the request
    was so large relative to the input that the whole index set is
    returned instead.
    """

    indices: np.ndarray
    exact: bool
    group_count: int
    group_size: int

    def mean_of(self, points):
        return np.mean(np.asarray(points)[self.indices], axis=0)

    def as_weights(self, total_weight):
        """Equal-share sparse weights over the multiset, duplicates merged."""
        share = np.full(self.indices.size, total_weight / self.indices.size)
        return SparseWeights.accumulate(self.indices, share)


def prob_coreset(points, eps, delta, seed):
    """Randomized mean summary by the most central of several group means.

    Draws ``k = floor(3.5 ln(1/delta)) + 1`` groups of ``ceil(4 / eps)``
    indices uniformly with replacement, and keeps the group whose mean
    has the smallest total distance to the other group means.  With
    probability at least ``1 - 3 delta`` the kept group's mean deviates
    from the true mean by at most ``33 eps`` times the variance, in
    normalized squared distance.

    If the total request exceeds ten times the input size the full index
    set is returned, flagged exact.
    """
    points = np.asarray(points, dtype=float)
    _check_eps(eps)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    n = points.shape[0]
    k = math.floor(3.5 * math.log(1.0 / delta)) + 1
    group = math.ceil(4.0 / eps)
    if 4.0 * k / eps > 10.0 * n:
        return ProbSummary(np.arange(n, dtype=np.int64), True, k, group)
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, n, size=k * group).reshape(k, group)
    means = points[draws].mean(axis=1)
    gaps = np.linalg.norm(means[:, None, :] - means[None, :, :], axis=2)
    best = int(np.argmin(gaps.sum(axis=0)))
    return ProbSummary(draws[best].astype(np.int64), False, k, group)
