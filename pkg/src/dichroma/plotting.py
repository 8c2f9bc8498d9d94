"""Figures for the selftest report, written next to a per-run table."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .pipeline import BUDGETS, OUTER  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.dpi": 100,
    "svg.hashsalt": "dichroma",
}

# PNG metadata would otherwise carry the matplotlib version string
_META = {"Software": None}


def write_run_table(runs, path: str) -> None:
    cols = ("kind", "n", "arcs", "seed", "colours", "exact_chi", "odd_layers", "inner_layers")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(cols) + "\n")
        for r in runs:
            row = [getattr(r, c) for c in cols]
            fh.write("\t".join("" if x is None else str(x) for x in row) + "\n")


def colours_vs_size(runs, path: str) -> None:
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.2))
        for kind, marker in (("in_class_p6_trianglefree", "o"), ("odd_cycle_blowup", "^")):
            pts = [(r.n, r.colours) for r in runs if r.kind == kind]
            if pts:
                xs, ys = zip(*pts)
                ax.scatter(xs, ys, s=10, marker=marker, alpha=0.6, label=kind)
        exact = [(r.n, r.exact_chi) for r in runs if r.exact_chi is not None]
        if exact:
            xs, ys = zip(*exact)
            ax.scatter(xs, ys, s=6, c="k", marker="x", label="exact (n<=10)")
        ax.set_xlabel("vertices")
        ax.set_ylabel("colours used")
        ax.set_title(f"pipeline colours (bound {BUDGETS.final(OUTER)})")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, metadata=_META)
        plt.close(fig)


def colour_histogram(runs, path: str) -> None:
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.0, 3.2))
        values = [r.colours for r in runs]
        if values:
            ax.hist(values, bins=range(0, max(values) + 2), align="left", color="0.4")
        ax.set_xlabel("colours used")
        ax.set_ylabel("instances")
        fig.tight_layout()
        fig.savefig(path, metadata=_META)
        plt.close(fig)


def render_selftest_figures(report, outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    paths = {
        "table": os.path.join(outdir, "pipeline_runs.tsv"),
        "scatter": os.path.join(outdir, "colours_vs_size.png"),
        "hist": os.path.join(outdir, "colour_histogram.png"),
    }
    write_run_table(report.runs, paths["table"])
    colours_vs_size(report.runs, paths["scatter"])
    colour_histogram(report.runs, paths["hist"])
    return list(paths.values())
