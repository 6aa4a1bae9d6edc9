"""Streaming summaries by merge-and-reduce over a binary bucket tree.

Chunks arrive one at a time; each is reduced to a coreset immediately
and stored at level 0.  Whenever two buckets meet at the same level they
are merged and reduced again, so after ``c`` chunks at most
``ceil(log2(c)) + 1`` buckets are alive.  Every reduce certifies its own
normalized error against its immediate input, and the worst of those
certificates bounds the final error up to the tree height.
"""

import numpy as np

from .core import SparseWeights, WeightedSet, summarization_error
from .coresets import coreset
from .errors import EmptyStream


class _Bucket:
    __slots__ = ("points", "weights", "indices")

    def __init__(self, points, weights, indices):
        self.points = points
        self.weights = weights
        self.indices = indices

    @property
    def size(self):
        return self.indices.size


class StreamSummary:
    """Bounded-memory summary of a stream of weighted chunks.

    Parameters
    ----------
    eps : float
        Error target passed to every reduce.
    chunk_size : int
        Nominal number of points per inserted chunk, at least 2; drivers
        are expected to cut their stream accordingly.
    mode : {"auto", "slow", "fast"}
        Solver mode used by the reduces.

    Attributes
    ----------
    reduce_errors : list of float
        Certified normalized error of each reduce performed so far.
    peak_buckets : int
        Largest number of simultaneously occupied buckets observed.
    """

    def __init__(self, eps, chunk_size, mode="auto"):
        if not 0.0 < eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {eps}")
        if chunk_size < 2:
            raise ValueError("chunk_size must be at least 2")
        self.eps = eps
        self.chunk_size = int(chunk_size)
        self.mode = mode
        self.buckets = []
        self.count = 0
        self.reduce_errors = []
        self.peak_buckets = 0

    @property
    def occupied(self):
        return sum(1 for b in self.buckets if b is not None)

    @property
    def max_reduce_error(self):
        return max(self.reduce_errors) if self.reduce_errors else 0.0

    def _reduce(self, points, weights, indices):
        ws = WeightedSet(points, weights)
        u = coreset(ws, self.eps, self.mode)
        self.reduce_errors.append(summarization_error(ws, u))
        return _Bucket(ws.points[u.indices], u.weights, indices[u.indices])

    def insert(self, points, weights=None):
        """Reduce one chunk and carry it up the bucket tree.

        Points are indexed globally by arrival order; the final summary
        refers to those positions.
        """
        points = np.asarray(points, dtype=float)
        if weights is None:
            weights = np.ones(points.shape[0])
        indices = np.arange(self.count, self.count + points.shape[0], dtype=np.int64)
        self.count += points.shape[0]
        bucket = self._reduce(points, weights, indices)
        level = 0
        while level < len(self.buckets) and self.buckets[level] is not None:
            other = self.buckets[level]
            self.buckets[level] = None
            merged_points = np.concatenate([other.points, bucket.points])
            merged_weights = np.concatenate([other.weights, bucket.weights])
            merged_indices = np.concatenate([other.indices, bucket.indices])
            bucket = self._reduce(merged_points, merged_weights, merged_indices)
            level += 1
        if level == len(self.buckets):
            self.buckets.append(None)
        self.buckets[level] = bucket
        self.peak_buckets = max(self.peak_buckets, self.occupied)

    def finalize(self):
        """Collapse the remaining buckets into one sparse summary.

        A single live bucket is returned as is; several are merged and
        reduced once more.  Raises EmptyStream if nothing was inserted.
        """
        alive = [b for b in self.buckets if b is not None]
        if not alive:
            raise EmptyStream("no chunks were inserted")
        if len(alive) == 1:
            final = alive[0]
        else:
            final = self._reduce(
                np.concatenate([b.points for b in alive]),
                np.concatenate([b.weights for b in alive]),
                np.concatenate([b.indices for b in alive]),
            )
        order = np.argsort(final.indices)
        return SparseWeights(final.indices[order], final.weights[order])
