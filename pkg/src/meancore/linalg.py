"""Deterministic SVD and orthogonal-matrix helpers.

The factorization itself is delegated to LAPACK through numpy; what this
module adds is a fixed sign convention so repeated runs and downstream
constructions see bit-identical factors, plus seeded orthogonal frames
for tests and experiments.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure


@dataclass(frozen=True)
class SvdFactors:
    """Thin factorization ``A = U @ diag(s) @ V.T``.

    ``U`` is (n, m), ``s`` has nonincreasing nonnegative entries of
    length ``m = min(A.shape)``, and ``V`` is (cols, m); both factor
    matrices have orthonormal columns.
    """

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray

    def reconstruct(self):
        return (self.U * self.s) @ self.V.T


def svd(a):
    """Thin SVD with a deterministic sign convention.

    Each right singular vector is flipped, together with its left
    partner, so that its largest-magnitude entry is nonnegative (first
    such entry on ties).  Raises ConvergenceFailure if the underlying
    iteration fails to converge.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("svd expects a nonempty 2-D array")
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    v = vh.T
    anchor = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[anchor, np.arange(v.shape[1])])
    signs[signs == 0.0] = 1.0
    return SvdFactors(u * signs, s, v * signs)


def frobenius_norm(a):
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(np.asarray(a, dtype=float)))


def random_orthogonal(d, cols, seed):
    """A seeded (d, cols) matrix with orthonormal columns, ``cols <= d``.

    Obtained by orthogonalizing Gaussian columns; the factor is made
    unique (hence reproducible) by fixing positive diagonal in the
    triangular part.
    """
    if cols > d or cols < 1:
        raise ValueError(f"need 1 <= cols <= d, got cols={cols}, d={d}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, cols))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return q * signs
