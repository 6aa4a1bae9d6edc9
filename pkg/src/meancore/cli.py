"""Command line interface.

Exit codes: 0 on success, 2 for configuration or input-parsing problems,
3 for numerical failures inside a construction.
"""

import argparse
import sys

from .apps import dim_coreset, one_mean_coreset
from .baselines import sensitivity_sample_sum, sensitivity_sample_svd, uniform_sample
from .core import SparseWeights, WeightedSet
from .coresets import coreset, prob_coreset
from .data import load_csv, make_synthetic, save_weights_csv
from .errors import CoresetError, DataError
from .harness import (
    ALGORITHMS,
    ExperimentConfig,
    metric_summarization,
    metric_svd,
    run_experiment,
    write_report,
)
from .streaming import StreamSummary


def _add_data_args(p):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", metavar="PATH", help="CSV file of points, one per row")
    group.add_argument(
        "--synthetic",
        metavar="SPEC",
        help="generator spec, e.g. gaussian:n=1000,d=10,seed=0",
    )
    p.add_argument(
        "--has-header", action="store_true", help="skip the first line of --input"
    )


def _load_points(args):
    if args.input is not None:
        return load_csv(args.input, args.has_header)
    return make_synthetic(args.synthetic)


def _emit_weights(sw, out):
    if out:
        save_weights_csv(out, sw)
    else:
        for i, w in zip(sw.indices, sw.weights):
            sys.stdout.write(f"{int(i)},{w:.17g}\n")


def _note(msg):
    sys.stderr.write(msg + "\n")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="meancore",
        description="Mean-preserving coresets: constructions, baselines, benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="sparse mean-preserving reweighting")
    _add_data_args(p)
    p.add_argument(
        "--algo",
        default="slow",
        choices=["slow", "fast", "auto", "prob", "uniform", "sens-sum"],
    )
    p.add_argument("--eps", type=float, help="error target for constructions")
    p.add_argument("--size", type=int, help="sample size for the samplers")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH", help="weights CSV; stdout if omitted")

    p = sub.add_parser("one-mean", help="coreset for sums of squared distances")
    _add_data_args(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--algo", default="auto", choices=["slow", "fast", "auto"])
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("svd", help="row weights preserving rank-k projection costs")
    _add_data_args(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument(
        "--algo",
        default="our-svd-slow",
        choices=["our-svd-slow", "our-svd-fast", "sens-svd"],
    )
    p.add_argument("--eps", type=float, help="error target (our-svd-*)")
    p.add_argument("--size", type=int, help="sample size (sens-svd)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("stream", help="merge-and-reduce summary of a chunked stream")
    _add_data_args(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--chunk-size", type=int, default=1000)
    p.add_argument("--mode", default="auto", choices=["auto", "slow", "fast"])
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("bench", help="run an algorithm grid and write a report")
    _add_data_args(p)
    p.add_argument(
        "--algo",
        default="slow,uniform",
        help=f"comma-separated algorithms from: {', '.join(ALGORITHMS)}",
    )
    p.add_argument("--eps", help="comma-separated error targets")
    p.add_argument("--sizes", help="comma-separated sample sizes")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--chunk-size", type=int, default=1000)
    p.add_argument("--out", metavar="PATH", help="report file; stdout CSV if omitted")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument(
        "--no-figures",
        action="store_true",
        help="skip the PNG curves normally written next to --out",
    )
    p.add_argument(
        "--no-timing",
        action="store_true",
        help="write time_ms as 0 so reports are byte-reproducible",
    )
    return parser


def _cmd_summarize(args):
    points = _load_points(args)
    ws = WeightedSet(points)
    if args.algo in ("slow", "fast", "auto"):
        if args.eps is None:
            raise ValueError(f"--eps is required for --algo {args.algo}")
        u = coreset(ws, args.eps, args.algo)
    elif args.algo == "prob":
        if args.eps is None:
            raise ValueError("--eps is required for --algo prob")
        ps = prob_coreset(points, args.eps, args.delta, args.seed)
        u = ps.as_weights(ws.total_weight)
    else:
        if args.size is None:
            raise ValueError(f"--size is required for --algo {args.algo}")
        if args.algo == "uniform":
            u = uniform_sample(ws, args.size, args.seed)
        else:
            u = sensitivity_sample_sum(ws, args.size, args.seed)
    _emit_weights(u, args.out)
    _note(
        f"n={ws.n} d={ws.dim} nnz={u.nnz} "
        f"mean_error={metric_summarization(ws, u):.6g}"
    )
    return 0


def _cmd_one_mean(args):
    points = _load_points(args)
    ws = WeightedSet(points)
    u = one_mean_coreset(ws, args.eps, args.algo)
    _emit_weights(u, args.out)
    _note(f"n={ws.n} d={ws.dim} nnz={u.nnz}")
    return 0


def _cmd_svd(args):
    points = _load_points(args)
    if args.algo == "sens-svd":
        if args.size is None:
            raise ValueError("--size is required for --algo sens-svd")
        u = sensitivity_sample_svd(points, args.k, args.size, args.seed)
        dense = u.to_dense(points.shape[0])
        sw = u
    else:
        if args.eps is None:
            raise ValueError(f"--eps is required for --algo {args.algo}")
        mode = "slow" if args.algo.endswith("slow") else "fast"
        ds = dim_coreset(points, args.k, args.eps, mode)
        dense = ds.weights
        sw = SparseWeights.from_dense(dense)
    _emit_weights(sw, args.out)
    _note(
        f"n={points.shape[0]} d={points.shape[1]} nnz={sw.nnz} "
        f"svd_error={metric_svd(points, args.k, dense):.6g}"
    )
    return 0


def _cmd_stream(args):
    points = _load_points(args)
    ws = WeightedSet(points)
    summary = StreamSummary(args.eps, args.chunk_size, args.mode)
    for start in range(0, points.shape[0], args.chunk_size):
        summary.insert(points[start : start + args.chunk_size])
    u = summary.finalize()
    _emit_weights(u, args.out)
    _note(
        f"n={ws.n} d={ws.dim} nnz={u.nnz} reduces={len(summary.reduce_errors)} "
        f"peak_buckets={summary.peak_buckets} "
        f"max_reduce_error={summary.max_reduce_error:.6g} "
        f"mean_error={metric_summarization(ws, u):.6g}"
    )
    return 0


def _parse_grid(text, cast):
    if text is None:
        return []
    return [cast(item) for item in text.split(",") if item.strip()]


def _cmd_bench(args):
    config = ExperimentConfig(
        algorithms=[a.strip() for a in args.algo.split(",") if a.strip()],
        synthetic=args.synthetic,
        input_path=args.input,
        has_header=args.has_header,
        eps=_parse_grid(args.eps, float),
        sizes=_parse_grid(args.sizes, int),
        k=args.k,
        delta=args.delta,
        seed=args.seed,
        trials=args.trials,
        chunk_size=args.chunk_size,
        timing=not args.no_timing,
    )
    rows = run_experiment(config)
    if args.out:
        write_report(rows, args.out, args.format)
        _note(f"wrote {len(rows)} rows to {args.out}")
        if not args.no_figures:
            from .figures import render_report_figures

            base = args.out.rsplit(".", 1)[0] if "." in args.out else args.out
            for path in render_report_figures(rows, base):
                _note(f"wrote {path}")
    else:
        from .harness import REPORT_COLUMNS, _format_field

        sys.stdout.write(",".join(REPORT_COLUMNS) + "\n")
        for row in rows:
            sys.stdout.write(
                ",".join(_format_field(row[c]) for c in REPORT_COLUMNS) + "\n"
            )
    return 0


_COMMANDS = {
    "summarize": _cmd_summarize,
    "one-mean": _cmd_one_mean,
    "svd": _cmd_svd,
    "stream": _cmd_stream,
    "bench": _cmd_bench,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DataError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except CoresetError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
