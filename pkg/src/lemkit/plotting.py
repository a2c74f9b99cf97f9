"""Matplotlib figures for lemniscates, census tables, and trial batches.

Everything renders off-screen (Agg) straight to a file; no interactive
backends, no global state beyond what pyplot itself keeps.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .polycore import MonicPolynomial


def lemniscate_figure(p: MonicPolynomial, path, resolution: int = 400,
                      level: float = 1.0) -> None:
    """Filled view of log|p| with the level curve and zeros overlaid."""
    z = p.zeros
    pad = 0.35 + 0.05 * max(np.ptp(z.real), np.ptp(z.imag))
    xs = np.linspace(z.real.min() - pad, z.real.max() + pad, resolution)
    ys = np.linspace(z.imag.min() - pad, z.imag.max() + pad, resolution)
    field = np.empty((ys.size, xs.size))
    for i, y in enumerate(ys):
        field[i] = p.log_abs(xs + 1j * y)

    log_level = math.log(level)
    fig, ax = plt.subplots(figsize=(6.4, 6.4 * ys.size / xs.size))
    span = max(1.0, np.percentile(np.abs(field[np.isfinite(field)]
                                         - log_level), 98))
    ax.contourf(xs, ys, field, levels=np.linspace(log_level - span,
                                                  log_level + span, 41),
                cmap="RdBu", extend="both")
    ax.contour(xs, ys, field, levels=[log_level], colors="black",
               linewidths=1.4)
    ax.plot(z.real, z.imag, "k.", markersize=4)
    ax.set_aspect("equal")
    ax.set_title(f"degree {p.degree}, level {level:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def census_figure(rows, path) -> None:
    """Component counts and the c_n / delta_n trends across a census."""
    ns = [r.n for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(ns, [r.count for r in rows], "o-", label="components")
    ax1.plot(ns, [n - 1 for n in ns], "--", color="gray", label="n - 1")
    ax1.set_xlabel("n")
    ax1.legend()
    ax2.plot(ns, [r.c_n for r in rows], "o-", label="smallest critical value")
    ax2.plot(ns, [r.delta_n for r in rows], "s-", label="shrink factor")
    ax2.axhline(1.0, color="gray", linewidth=0.8)
    ax2.set_xlabel("n")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def ratio_histogram(summary, path) -> None:
    """Distribution of per-trial component ratios with the mean marked."""
    ratios = summary.ratios
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    bins = max(8, min(30, ratios.size // 3 + 8))
    ax.hist(ratios, bins=bins, color="steelblue", edgecolor="black")
    ax.axvline(summary.mean_ratio, color="crimson", linewidth=1.5,
               label=f"mean {summary.mean_ratio:.3f}")
    ax.axvline(summary.max_ratio, color="darkorange", linewidth=1.2,
               linestyle="--", label=f"max {summary.max_ratio:.3f}")
    ax.set_xlabel("components / degree")
    ax.set_ylabel("trials")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def capacity_sweep_figure(rows, path) -> None:
    ns = [r["n"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.semilogx(ns, [r["raw"] for r in rows], "o-", base=2, label="raw")
    ax.semilogx(ns, [r["calibrated"] for r in rows], "s-", base=2,
                label="calibrated")
    ax.set_xlabel("points")
    ax.set_ylabel("capacity estimate")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def rows_figure(rows, xkey: str, ykeys, xlabel: str, path) -> None:
    """Line plot of selected columns from a list-of-dicts table."""
    xs = [r[xkey] for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for key in ykeys:
        ax.plot(xs, [r[key] for r in rows], "o-", label=key)
    ax.set_xlabel(xlabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
