"""Render figures from hitrun CSV outputs.

Consumes only the published CSV schemas:
  spectrum  `index,eigenvalue`
  histogram `bin_left,count`
  curves    `t,tv,d2,dinf` (or any CSV with `t` plus the plotted column)

Kinds: eig-hist (one spectrum), eig-hist-overlay (two spectra), curve
(distance vs t), cutoff-panel (several d2 curves in one panel).  Output is
SVG by default, rendered deterministically (fixed hash salt, no timestamps).
"""
from __future__ import annotations

import argparse
import csv
import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams["svg.hashsalt"] = "hitrun-plots"

BIN_WIDTH = 0.01
NEAR_ZERO = 0.01


class SchemaError(ValueError):
    pass


def read_columns(path: str, required: tuple) -> dict:
    """Columns of a CSV as float lists; fails naming the first missing column."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in required:
            if col not in header:
                raise SchemaError(f"{path}: missing column '{col}'")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return {col: [float(r[col]) for r in rows] for col in required}


def read_spectrum(path: str) -> list:
    return read_columns(path, ("index", "eigenvalue"))["eigenvalue"]


def near_zero_count(eigenvalues, tol: float = NEAR_ZERO) -> int:
    return sum(1 for v in eigenvalues if abs(v) < tol)


def _bins(values) -> list:
    lo = min(0.0, math.floor(min(values) / BIN_WIDTH) * BIN_WIDTH)
    edges = []
    x = lo
    while x < 1.0 + BIN_WIDTH / 2:
        edges.append(round(x, 10))
        x += BIN_WIDTH
    return edges


def _new_figure():
    return plt.subplots(figsize=(6.4, 4.0), dpi=100)


def render_eig_hist(inputs, title):
    vals = read_spectrum(inputs[0])
    fig, ax = _new_figure()
    ax.hist(vals, bins=_bins(vals), color="tab:blue")
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("count")
    ax.set_title(title or "eigenvalue distribution")
    return fig


def render_eig_hist_overlay(inputs, title):
    if len(inputs) < 2:
        raise SchemaError("eig-hist-overlay needs two spectrum CSVs")
    a, b = read_spectrum(inputs[0]), read_spectrum(inputs[1])
    fig, ax = _new_figure()
    edges = _bins(a + b)
    ax.hist(a, bins=edges, alpha=0.6, color="tab:blue",
            label=f"{inputs[0]} (|eig|<{NEAR_ZERO}: {near_zero_count(a)})")
    ax.hist(b, bins=edges, alpha=0.6, color="tab:orange",
            label=f"{inputs[1]} (|eig|<{NEAR_ZERO}: {near_zero_count(b)})")
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("count")
    ax.legend(fontsize=7)
    ax.set_title(title or "spectra comparison")
    return fig


def render_curve(inputs, title, column="tv"):
    data = read_columns(inputs[0], ("t", column))
    fig, ax = _new_figure()
    ax.plot(data["t"], data[column], marker="o", markersize=2, color="tab:blue")
    ax.set_xlabel("t")
    ax.set_ylabel(column)
    ax.set_yscale("log")
    ax.set_title(title or f"{column} distance curve")
    return fig


def render_cutoff_panel(inputs, title):
    fig, ax = _new_figure()
    for path in inputs:
        data = read_columns(path, ("t", "d2"))
        ax.plot(data["t"], data["d2"], label=path)
    ax.set_xlabel("t")
    ax.set_ylabel("d2")
    ax.set_yscale("log")
    ax.legend(fontsize=7)
    ax.set_title(title or "cutoff curves")
    return fig


KINDS = {
    "eig-hist": render_eig_hist,
    "eig-hist-overlay": render_eig_hist_overlay,
    "curve": render_curve,
    "cutoff-panel": render_cutoff_panel,
}


def render(inputs, kind, out, title="", column="tv"):
    if kind == "curve":
        fig = render_curve(inputs, title, column)
    else:
        fig = KINDS[kind](inputs, title)
    try:
        fig.savefig(out, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("inputs", nargs="+", help="input CSV path(s)")
    parser.add_argument("--kind", choices=sorted(KINDS), required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--title", default="")
    parser.add_argument("--column", default="tv", choices=("tv", "d2", "dinf"),
                        help="column plotted by --kind curve")
    args = parser.parse_args(argv)
    try:
        render(args.inputs, args.kind, args.out, args.title, args.column)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
