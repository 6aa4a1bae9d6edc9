"""Input parsing, weight output, and synthetic datasets."""

import csv

import numpy as np

from .errors import ParseError, RaggedRows


def load_csv(path, has_header=False):
    """Read a numeric CSV into an (n, d) array.

    Raises ParseError with 1-based line and column on the first field
    that fails to parse, and RaggedRows if row widths disagree.  Blank
    lines are skipped.
    """
    rows = []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, fields in enumerate(reader, start=1):
            if has_header and lineno == 1:
                continue
            if not fields or all(f.strip() == "" for f in fields):
                continue
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise RaggedRows(
                    f"row at line {lineno} has {len(fields)} fields, expected {width}"
                )
            parsed = []
            for col, field in enumerate(fields, start=1):
                try:
                    parsed.append(float(field))
                except ValueError:
                    raise ParseError(
                        f"could not parse {field.strip()!r} as a number", lineno, col
                    ) from None
            rows.append(parsed)
    if not rows:
        raise ParseError("no data rows", 1, 1)
    return np.asarray(rows, dtype=float)


def save_weights_csv(path, sw):
    """Write sparse weights as ``index,weight`` lines, one per nonzero.

    Indices are 0-based; weights carry 17 significant digits so they
    round-trip exactly.
    """
    with open(path, "w") as fh:
        for i, w in zip(sw.indices, sw.weights):
            fh.write(f"{int(i)},{w:.17g}\n")


def gaussian(n, d, seed):
    """Standard normal points."""
    return np.random.default_rng(seed).standard_normal((n, d))


def heavy_tail(n, d, seed):
    """Standard normal points with one percent of them scaled 100-fold."""
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n, d))
    outliers = max(1, round(0.01 * n))
    idx = rng.choice(n, size=outliers, replace=False)
    pts[idx] *= 100.0
    return pts


def low_rank_noise(n, d, seed, rank=None, noise=0.05):
    """Points near a random low-dimensional subspace plus isotropic noise."""
    rng = np.random.default_rng(seed)
    if rank is None:
        rank = max(1, d // 4)
    rank = min(rank, d)
    left = rng.standard_normal((n, rank))
    right = rng.standard_normal((rank, d))
    return left @ right / np.sqrt(rank) + noise * rng.standard_normal((n, d))


_GENERATORS = {
    "gaussian": gaussian,
    "heavy-tail": heavy_tail,
    "low-rank+noise": low_rank_noise,
}


def make_synthetic(spec):
    """Build a dataset from a spec like ``gaussian:n=1000,d=10,seed=0``.

    Generators: gaussian, heavy-tail, low-rank+noise.  ``n``, ``d`` and
    ``seed`` are required integers; low-rank+noise also accepts ``rank``
    (int) and ``noise`` (float).
    """
    name, _, arg_str = spec.partition(":")
    name = name.strip()
    if name not in _GENERATORS:
        known = ", ".join(sorted(_GENERATORS))
        raise ValueError(f"unknown generator {name!r}; expected one of {known}")
    kwargs = {}
    if arg_str.strip():
        for item in arg_str.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"malformed parameter {item!r} in {spec!r}")
            kwargs[key.strip()] = value.strip()
    try:
        n = int(kwargs.pop("n"))
        d = int(kwargs.pop("d"))
        seed = int(kwargs.pop("seed"))
    except KeyError as exc:
        raise ValueError(f"synthetic spec {spec!r} is missing {exc.args[0]}") from None
    extra = {}
    if name == "low-rank+noise":
        if "rank" in kwargs:
            extra["rank"] = int(kwargs.pop("rank"))
        if "noise" in kwargs:
            extra["noise"] = float(kwargs.pop("noise"))
    if kwargs:
        raise ValueError(f"unknown parameters {sorted(kwargs)} in {spec!r}")
    return _GENERATORS[name](n, d, seed, **extra)
