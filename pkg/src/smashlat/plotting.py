"""Matplotlib figures for classification and search reports."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

REGION_COLORS = {
    "BA": "#9ecae1",
    "cBA∖BA": "#a1d99b",
    "DL∖cBA": "#fdae6b",
    "outside DL": "#d9d9d9",
    "BA∖cBA": "#fb6a4a",
}


def hasse_positions(L):
    """x spread evenly within each rank, y = rank."""
    by_rank = {}
    for x in L.elements():
        by_rank.setdefault(L.rank[x], []).append(x)
    pos = {}
    for r, xs in by_rank.items():
        width = len(xs)
        for k, x in enumerate(xs):
            pos[x] = (k - (width - 1) / 2.0, float(r))
    return pos


def plot_hasse(M, C, path, title=None):
    L = M.lattice
    pos = hasse_positions(L)
    width = max(4.0, 1.3 * max(list(L.rank).count(r) for r in set(L.rank)))
    height = max(3.0, 1.1 * (max(L.rank) + 1))
    fig, ax = plt.subplots(figsize=(width, height))
    for x, y in L.covers:
        (x0, y0), (x1, y1) = pos[x], pos[y]
        ax.plot([x0, x1], [y0, y1], color="0.5", lw=1, zorder=1)
    for x in L.elements():
        px, py = pos[x]
        region = C.region(x)
        ax.scatter([px], [py], s=500, color=REGION_COLORS[region], edgecolors="k", zorder=2)
        ax.annotate(L.names[x], (px, py), ha="center", va="center", fontsize=7, zorder=3)
    handles = [plt.Line2D([], [], marker="o", ls="", markersize=9, markerfacecolor=c,
                          markeredgecolor="k", label=r)
               for r, c in REGION_COLORS.items()
               if any(C.region(x) == r for x in L.elements())]
    ax.legend(handles=handles, loc="upper left", fontsize=7, frameon=False)
    ax.set_title(title or M.name, fontsize=10)
    ax.axis("off")
    ax.margins(0.15)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_witness_counts(summaries, pred, path):
    sizes = [s.size for s in summaries]
    totals = [s.models for s in summaries]
    hits = [s.witness_counts.get(pred, 0) for s in summaries]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(sizes, totals, color="0.8", label="models")
    ax.bar(sizes, hits, color="#e6550d", label=pred)
    ax.set_xlabel("carrier size")
    ax.set_ylabel("models up to isomorphism")
    ax.set_yscale("symlog")
    ax.set_xticks(sizes)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
