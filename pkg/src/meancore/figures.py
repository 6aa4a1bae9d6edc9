"""Figure rendering for benchmark reports.

Each report gets an error curve and a timing curve, one line per
algorithm over the accuracy grid, saved next to the delimited output.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _grid_value(row):
    return row["eps"] if row["eps"] is not None else row["size"]


def _aggregate(rows, key):
    """Mean and spread of ``key`` per (algorithm, grid value)."""
    curves = {}
    for row in rows:
        x = _grid_value(row)
        curves.setdefault(row["algorithm"], {}).setdefault(x, []).append(row[key])
    out = {}
    for algo, by_x in curves.items():
        xs = sorted(by_x)
        means = np.array([np.mean(by_x[x]) for x in xs])
        stds = np.array([np.std(by_x[x]) for x in xs])
        out[algo] = (np.array(xs, dtype=float), means, stds)
    return out


def _render_curve(rows, key, ylabel, path):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for algo, (xs, means, stds) in sorted(_aggregate(rows, key).items()):
        ax.errorbar(xs, means, yerr=stds, marker="o", capsize=3, label=algo)
    ax.set_xscale("log")
    positive = [r[key] for r in rows if r[key] > 0]
    if positive and len(positive) == len(rows):
        ax.set_yscale("log")
    kinds = {("eps" if r["eps"] is not None else "size") for r in rows}
    ax.set_xlabel(" / ".join(sorted(kinds)))
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_report_figures(rows, out_base):
    """Render error and time curves for the finished rows.

    Failed cells (non-ok status or NaN error) are left out.  Returns the
    list of file paths written; empty if nothing was plottable.
    """
    ok = [r for r in rows if r["status"] == "ok" and r["error"] == r["error"]]
    if not ok:
        return []
    paths = [
        _render_curve(ok, "error", "summarization error", f"{out_base}_error.png"),
        _render_curve(ok, "time_ms", "construction time (ms)", f"{out_base}_time.png"),
    ]
    return paths
