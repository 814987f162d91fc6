"""Matplotlib renderings of the exported tables: token bars, relationship
heatmap, and activity curves.  All renderers write straight to file."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reporting import AblationTable


def render_ablation(table: AblationTable, path: str) -> None:
    names = [r.arm for r in table.rows]
    totals = [r.total_tokens for r in table.rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    bars = ax.bar(names, totals, color=["#888888", "#4878d0", "#ee854a", "#6acc64"])
    for bar, row in zip(bars, table.rows):
        ax.annotate(f"{row.ratio:.1%}", (bar.get_x() + bar.get_width() / 2, bar.get_height()),
                    ha="center", va="bottom", fontsize=9)
    ax.set_ylabel("total tokens")
    ax.set_title("Token consumption by configuration")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_relmap(initials: list[str], matrix: list[list[int | None]], path: str) -> None:
    n = len(initials)
    grid = np.zeros((n, n))
    mask = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            if matrix[i][j] is None:
                mask[i, j] = True
            else:
                grid[i, j] = matrix[i][j]
    display = np.ma.masked_array(grid, mask)
    fig, ax = plt.subplots(figsize=(0.6 * n + 2, 0.6 * n + 2))
    im = ax.imshow(display, cmap="YlOrRd", vmin=0, vmax=10)
    ax.set_xticks(range(n), initials)
    ax.set_yticks(range(n), initials)
    for i in range(n):
        for j in range(n):
            if not mask[i, j]:
                ax.text(j, i, int(grid[i, j]), ha="center", va="center", fontsize=8)
    fig.colorbar(im, ax=ax, label="relationship score")
    ax.set_title("Relationship score map")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_activity_curve(agents: list[str], rows: list[list[int]], path: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    runs = range(1, len(rows) + 1)
    for idx, agent in enumerate(agents):
        ax.plot(list(runs), [row[idx] for row in rows], marker="o", label=agent)
    ax.set_xlabel("run iteration")
    ax.set_ylabel("cumulative distinct activities")
    ax.set_title("Activity types over repeated runs")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
