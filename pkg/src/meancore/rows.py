"""Row access used by the solvers.

The simplex solver and the recursive booster only ever touch the point
matrix through a handful of bulk operations.  Routing them through this
small adapter lets callers hand over either a dense array or a generator
that produces rows in blocks, so feature matrices too large to hold in
memory (quadratic features of every input row, for instance) never get
materialized.
"""

import numpy as np


class DenseRows:
    """Adapter over an in-memory (n, dim) array."""

    def __init__(self, points):
        self.points = np.asarray(points, dtype=float)
        self.n, self.dim = self.points.shape

    def matvec(self, v):
        return self.points @ v

    def row(self, i):
        return self.points[i]

    def take(self, indices):
        return self.points[np.asarray(indices, dtype=np.int64)]

    def slab(self, start, stop):
        return self.points[start:stop]

    def sq_norms(self):
        return np.einsum("ij,ij->i", self.points, self.points)

    def sq_dists_to(self, c):
        diff = self.points - c
        return np.einsum("ij,ij->i", diff, diff)

    def weighted_sum(self, w):
        return w @ self.points

    def segment_weighted_sums(self, boundaries, w):
        sizes = np.diff(boundaries)
        distinct = np.unique(sizes)
        # balanced contiguous segments (all the larger ones first) fold
        # into at most two reshaped einsum passes, no (n, dim) temporary
        if distinct.size <= 2 and np.all(sizes[:-1] >= sizes[1:]):
            out = np.empty((sizes.size, self.dim))
            row = 0
            seg = 0
            for size in distinct[::-1]:
                count = int(np.sum(sizes == size))
                stop = row + count * int(size)
                block = self.points[row:stop].reshape(count, int(size), self.dim)
                wb = w[row:stop].reshape(count, int(size))
                out[seg : seg + count] = np.einsum("pmd,pm->pd", block, wb)
                row, seg = stop, seg + count
            return out
        wp = self.points * w[:, None]
        return np.add.reduceat(wp, boundaries[:-1], axis=0)


class BlockRows:
    """Adapter over rows produced on demand, ``block_fn(start, stop)``.

    ``block_fn`` must return the rows ``start:stop`` as an array and be
    deterministic, since blocks are regenerated on every pass.
    """

    def __init__(self, n, dim, block_fn, block_rows=None, segment_fn=None):
        self.n = int(n)
        self.dim = int(dim)
        self.block_fn = block_fn
        if block_rows is None:
            # roughly 4 MiB per block
            block_rows = max(1, (4 << 20) // (8 * self.dim))
        self.block_rows = int(block_rows)
        # sources with exploitable structure can hand in a cheaper
        # segment-sum routine than blockwise regeneration
        self.segment_fn = segment_fn

    def blocks(self):
        for start in range(0, self.n, self.block_rows):
            stop = min(start + self.block_rows, self.n)
            yield start, stop, self.block_fn(start, stop)

    def matvec(self, v):
        out = np.empty(self.n)
        for start, stop, blk in self.blocks():
            out[start:stop] = blk @ v
        return out

    def row(self, i):
        return self.block_fn(i, i + 1)[0]

    def take(self, indices):
        indices = np.asarray(indices, dtype=np.int64)
        out = np.empty((indices.size, self.dim))
        order = np.argsort(indices, kind="stable")
        sorted_idx = indices[order]
        pos = 0
        for start in range(0, self.n, self.block_rows):
            stop = min(start + self.block_rows, self.n)
            hi = np.searchsorted(sorted_idx, stop, side="left")
            if hi > pos:
                blk = self.block_fn(start, stop)
                out[order[pos:hi]] = blk[sorted_idx[pos:hi] - start]
                pos = hi
            if pos == indices.size:
                break
        return out

    def slab(self, start, stop):
        return self.block_fn(start, stop)

    def sq_norms(self):
        out = np.empty(self.n)
        for start, stop, blk in self.blocks():
            out[start:stop] = np.einsum("ij,ij->i", blk, blk)
        return out

    def sq_dists_to(self, c):
        out = np.empty(self.n)
        for start, stop, blk in self.blocks():
            diff = blk - c
            out[start:stop] = np.einsum("ij,ij->i", diff, diff)
        return out

    def weighted_sum(self, w):
        out = np.zeros(self.dim)
        for start, stop, blk in self.blocks():
            out += w[start:stop] @ blk
        return out

    def segment_weighted_sums(self, boundaries, w):
        if self.segment_fn is not None:
            return self.segment_fn(boundaries, w)
        k = boundaries.size - 1
        out = np.zeros((k, self.dim))
        for start, stop, blk in self.blocks():
            wp = blk * w[start:stop, None]
            j0 = int(np.searchsorted(boundaries, start, side="right")) - 1
            j1 = int(np.searchsorted(boundaries, stop - 1, side="right")) - 1
            cuts = boundaries[j0 + 1 : j1 + 1]
            offsets = np.concatenate(([0], cuts - start))
            out[j0 : j1 + 1] += np.add.reduceat(wp, offsets, axis=0)
        return out


def as_rows(points):
    """Wrap a dense array; pass an existing adapter through unchanged."""
    if isinstance(points, (DenseRows, BlockRows)):
        return points
    return DenseRows(points)
