"""Frank-Wolfe solver for sparse mean approximation on the simplex.

Given points ``p_1 .. p_n`` inside the unit ball and a probability
vector ``w``, the solver maximizes ``f(x) = -|sum_i (w_i - x_i) p_i|^2``
over the probability simplex.  Each iteration moves toward a single
vertex, so after ``k`` iterations the iterate has at most ``k + 1``
nonzero entries while the squared residual is guaranteed to fall below
``8 / (k + 3)``.  That tradeoff, sparsity against squared error, is the
engine behind every construction in this package.
"""

import math

import numpy as np

from .core import SparseWeights, TAU_NORM
from .errors import UnitBallViolation
from .rows import as_rows

# Below this squared step norm the line search treats the direction as
# degenerate and keeps the current iterate.
TAU_FW = 1e-14

# Maintained quantities are recomputed from scratch this often.
REFRESH_EVERY = 64


def iterations_for_error(eps):
    """Iteration count certifying squared residual at most ``eps``.

    Inverts the ``8 / (k + 3)`` convergence bound.  The corresponding
    support size ``k + 1`` then stays strictly below ``8 / eps``.
    """
    return max(1, math.ceil(8.0 / eps - 3.0))


class FwProblem:
    """Validated problem instance.

    Parameters
    ----------
    points : array or row adapter, shape (n, dim)
        Points, all within the unit ball up to ``TAU_NORM``.
    weights : array, shape (n,)
        Nonnegative target weights summing to one.
    iterations : int
        Number of iterations a full solve runs.
    """

    def __init__(self, points, weights, iterations):
        self.rows = as_rows(points)
        self.weights = np.asarray(weights, dtype=float)
        if self.weights.shape != (self.rows.n,):
            raise ValueError("weights must match the number of points")
        if np.any(self.weights < 0.0):
            raise ValueError("target weights must be nonnegative")
        total = float(np.sum(self.weights))
        if abs(total - 1.0) > TAU_NORM:
            raise ValueError(f"target weights sum to {total}, expected 1")
        if iterations < 1:
            raise ValueError("iterations must be at least 1")
        self.iterations = int(iterations)
        self.sq_norms = self.rows.sq_norms()
        worst = float(np.max(self.sq_norms))
        if worst > (1.0 + TAU_NORM) ** 2:
            raise UnitBallViolation(f"point norm {math.sqrt(worst)} exceeds the unit ball")
        self.target_mean = self.rows.weighted_sum(self.weights)

    @property
    def n(self):
        return self.rows.n


class FwState:
    """Mutable iterate: simplex vector ``x``, its image ``ax = sum x_i p_i``,
    the residual ``r = sum (w_i - x_i) p_i`` and its squared norm."""

    def __init__(self, x, ax, target_mean, iteration):
        self.x = x
        self.ax = ax
        self.r = target_mean - ax
        self.rr = float(self.r @ self.r)
        self.iteration = iteration

    @property
    def objective(self):
        return -self.rr


def fw_init(problem):
    """Start at the vertex whose point is closest to the target mean.

    Ties go to the smallest index.
    """
    mu = problem.target_mean
    # |p_i - mu|^2 up to the shared |mu|^2 term
    score = problem.sq_norms - 2.0 * problem.rows.matvec(mu)
    i = int(np.argmin(score))
    x = np.zeros(problem.n)
    x[i] = 1.0
    return FwState(x, problem.rows.row(i).copy(), mu, 0)


def fw_gradient(state, problem):
    """Ascent gradient of the objective at the current iterate, ``2 A^T r``."""
    return 2.0 * problem.rows.matvec(state.r)


def fw_line_search(state, problem, j):
    """Exact step size toward vertex ``j``, clamped to [0, 1].

    The objective is quadratic along ``x + a (e_j - x)``, so the
    unconstrained optimum ``(r . h) / |h|^2`` with ``h = p_j - ax`` is
    exact; degenerate directions return 0.
    """
    h = problem.rows.row(j) - state.ax
    hh = float(h @ h)
    if hh <= TAU_FW:
        return 0.0
    return min(1.0, max(0.0, float(state.r @ h) / hh))


def fw_iterate(problem):
    """Yield the live state after initialization and after every iteration.

    The same state object is yielded each time and mutated in place;
    consumers that keep history must copy.  ``ax`` is refreshed from
    scratch every ``REFRESH_EVERY`` iterations to pin down drift.
    """
    state = fw_init(problem)
    yield state
    mu = problem.target_mean
    rows = problem.rows
    for k in range(1, problem.iterations + 1):
        g = fw_gradient(state, problem)
        j = int(np.argmax(g))
        alpha = fw_line_search(state, problem, j)
        state.x *= 1.0 - alpha
        state.x[j] += alpha
        if k % REFRESH_EVERY == 0:
            state.ax = rows.weighted_sum(state.x)
        else:
            state.ax = (1.0 - alpha) * state.ax + alpha * rows.row(j)
        state.r = mu - state.ax
        state.rr = float(state.r @ state.r)
        state.iteration = k
        yield state


def fw_solve(problem, stop_below=None):
    """Run the configured number of iterations and return the sparse iterate.

    Parameters
    ----------
    problem : FwProblem
    stop_below : float, optional
        Early exit once the squared residual is at most this value.

    Returns
    -------
    SparseWeights
        The final iterate restricted to its support; entries sum to one.
    """
    state = None
    for state in fw_iterate(problem):
        if stop_below is not None and state.rr <= stop_below:
            break
    return SparseWeights.from_dense(state.x)
