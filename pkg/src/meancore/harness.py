"""Benchmark harness: quality metrics, experiment grids, report files."""

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .apps import dim_coreset
from .baselines import sensitivity_sample_sum, sensitivity_sample_svd, uniform_sample
from .core import WeightedSet, weighted_mean
from .coresets import coreset, prob_coreset
from .data import load_csv, make_synthetic
from .errors import CoresetError, ExactRankCase
from .linalg import svd
from .streaming import StreamSummary

ALGORITHMS = (
    "slow",
    "fast",
    "prob",
    "uniform",
    "sens-sum",
    "our-svd-slow",
    "our-svd-fast",
    "sens-svd",
    "stream",
)

_SVD_ALGOS = ("our-svd-slow", "our-svd-fast", "sens-svd")
_SIZE_DRIVEN = ("uniform", "sens-sum", "sens-svd")


def metric_summarization(s, u):
    """Squared distance between the input mean and the summary mean."""
    gap = u.mean_of(s.points) - weighted_mean(s)
    return float(gap @ gap)


def metric_svd(a, k, weights):
    """Relative deviation of the weighted rank-``k`` residual cost.

    The reference cost is the squared spectral tail of ``a`` beyond
    ``k``.  The contender projects ``a`` onto the top-``k`` right
    singular directions of the row-weighted matrix (rows scaled by root
    weights) and measures the same residual on the unweighted matrix.
    A reference cost of zero with a nonzero contender has no relative
    scale and raises ExactRankCase.
    """
    a = np.asarray(a, dtype=float)
    factors = svd(a)
    cstar = float(np.sum(factors.s[k:] ** 2))
    total = float(np.sum(factors.s**2))
    weighted = np.sqrt(np.asarray(weights, dtype=float))[:, None] * a
    wf = svd(weighted)
    vk = wf.V[:, :k]
    cprime = total - float(np.sum((a @ vk) ** 2))
    tol = 1e-12 * total
    if cstar <= tol:
        if cprime <= tol:
            return 0.0
        raise ExactRankCase("input has rank at most k; relative cost is undefined")
    return abs(cstar - cprime) / cstar


@dataclass
class ExperimentConfig:
    """One benchmark run: algorithms crossed with an accuracy grid.

    Exactly one of ``synthetic`` (generator spec) and ``input_path``
    (CSV) supplies the data.  ``eps`` cells drive the constructions
    directly; ``sizes`` cells drive the samplers directly.  A cell of
    the other kind is translated through the support bound (128 over
    eps, and its inverse; 4 over eps for the randomized variant), except
    for the svd constructions which accept only ``eps``.
    """

    algorithms: list
    synthetic: str = None
    input_path: str = None
    has_header: bool = False
    eps: list = field(default_factory=list)
    sizes: list = field(default_factory=list)
    k: int = 2
    delta: float = 0.01
    seed: int = 0
    trials: int = 20
    chunk_size: int = 1000
    timing: bool = True

    def validate(self):
        if (self.synthetic is None) == (self.input_path is None):
            raise ValueError("provide exactly one of synthetic spec and input path")
        if not self.eps and not self.sizes:
            raise ValueError("provide at least one eps or size cell")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithms {unknown}; known: {list(ALGORITHMS)}")
        if not self.algorithms:
            raise ValueError("provide at least one algorithm")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        for algo in self.algorithms:
            if algo in ("our-svd-slow", "our-svd-fast") and self.sizes:
                raise ValueError(f"{algo} is driven by eps; a size grid has no meaning")


def _resolve_cell(algo, kind, value):
    """Translate a grid cell into the (eps, size) pair an algorithm uses."""
    if kind == "eps":
        eps = float(value)
        size = None if algo not in _SIZE_DRIVEN else max(1, math.ceil(128.0 / eps))
        return eps, size
    size = int(value)
    if algo in _SIZE_DRIVEN:
        return None, size
    if algo == "prob":
        return min(0.99, 4.0 / size), size
    return min(0.99, 128.0 / size), size


def _run_cell(algo, points, ws, eps, size, config, seed):
    n = points.shape[0]
    if algo == "slow" or algo == "fast":
        u = coreset(ws, eps, algo)
        return u.nnz, metric_summarization(ws, u)
    if algo == "prob":
        ps = prob_coreset(points, eps, config.delta, seed)
        u = ps.as_weights(ws.total_weight)
        return int(ps.indices.size), metric_summarization(ws, u)
    if algo == "uniform":
        u = uniform_sample(ws, size, seed)
        return u.nnz, metric_summarization(ws, u)
    if algo == "sens-sum":
        u = sensitivity_sample_sum(ws, size, seed)
        return u.nnz, metric_summarization(ws, u)
    if algo == "sens-svd":
        u = sensitivity_sample_svd(points, config.k, size, seed)
        return u.nnz, metric_svd(points, config.k, u.to_dense(n))
    if algo in ("our-svd-slow", "our-svd-fast"):
        mode = "slow" if algo.endswith("slow") else "fast"
        ds = dim_coreset(points, config.k, eps, mode)
        return ds.nnz, metric_svd(points, config.k, ds.weights)
    if algo == "stream":
        summary = StreamSummary(eps, config.chunk_size)
        for start in range(0, n, config.chunk_size):
            summary.insert(points[start : start + config.chunk_size])
        u = summary.finalize()
        return u.nnz, metric_summarization(ws, u)
    raise ValueError(f"unknown algorithm {algo!r}")


def run_experiment(config):
    """Run the grid and return one row dict per (algorithm, cell, trial).

    Construction failures are recorded in the row's ``status`` with a
    NaN error; remaining cells still run.  With ``config.timing`` off,
    ``time_ms`` is written as zero so reports are byte-reproducible.
    """
    config.validate()
    if config.synthetic is not None:
        points = make_synthetic(config.synthetic)
    else:
        points = load_csv(config.input_path, config.has_header)
    ws = WeightedSet(points)
    n, d = points.shape

    cells = [("eps", e) for e in config.eps] + [("size", s) for s in config.sizes]
    rows = []
    randomized = ("prob", "uniform", "sens-sum", "sens-svd")
    for algo in config.algorithms:
        for c, (kind, value) in enumerate(cells):
            eps, size = _resolve_cell(algo, kind, value)
            for trial in range(config.trials):
                seed = config.seed + 100003 * c + trial
                used_seed = seed if algo in randomized else config.seed
                start = time.perf_counter()
                try:
                    out_size, err = _run_cell(algo, points, ws, eps, size, config, seed)
                    status = "ok"
                except CoresetError as exc:
                    out_size, err = 0, float("nan")
                    status = type(exc).__name__
                elapsed = (time.perf_counter() - start) * 1e3 if config.timing else 0.0
                rows.append(
                    {
                        "algorithm": algo,
                        "n": n,
                        "d": d,
                        "eps": eps,
                        "size": size,
                        "coreset_size": out_size,
                        "error": err,
                        "time_ms": elapsed,
                        "seed": used_seed,
                        "trial": trial,
                        "status": status,
                    }
                )
    return rows


REPORT_COLUMNS = (
    "algorithm",
    "n",
    "d",
    "eps",
    "size",
    "coreset_size",
    "error",
    "time_ms",
    "seed",
    "trial",
    "status",
)


def _format_field(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_report(rows, path, fmt="csv"):
    """Write rows as CSV (17 significant digits) or JSON."""
    if fmt == "csv":
        with open(path, "w") as fh:
            fh.write(",".join(REPORT_COLUMNS) + "\n")
            for row in rows:
                fh.write(",".join(_format_field(row[c]) for c in REPORT_COLUMNS) + "\n")
    elif fmt == "json":
        with open(path, "w") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return path
