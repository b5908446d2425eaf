"""Figures rendered next to report files: a status matrix and a timing chart."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.patches import Patch

_STATUS_LEVEL = {"pass": 0, "inapplicable": 1, "fail": 2}
_STATUS_COLORS = ["#4d9e52", "#b0b0b0", "#c23b3b"]
_STATUS_NAMES = ["pass", "inapplicable", "fail"]


def render_status_matrix(reports: Sequence, path: str | Path) -> None:
    """Groups by claims, each cell the worst status across partitions."""
    groups = sorted({r.group_id for r in reports})
    claims = [c for c in _claim_order(reports)]
    grid = np.zeros((len(groups), len(claims)), dtype=int)
    g_pos = {g: i for i, g in enumerate(groups)}
    c_pos = {c: i for i, c in enumerate(claims)}
    for r in reports:
        level = _STATUS_LEVEL[r.status]
        i, j = g_pos[r.group_id], c_pos[r.claim_id]
        grid[i, j] = max(grid[i, j], level)

    height = max(2.5, 0.28 * len(groups) + 1.2)
    width = max(4.0, 0.6 * len(claims) + 2.0)
    fig, ax = plt.subplots(figsize=(width, height))
    ax.imshow(grid, cmap=ListedColormap(_STATUS_COLORS), vmin=0, vmax=2, aspect="auto")
    ax.set_xticks(range(len(claims)), claims, rotation=45, ha="right", fontsize=8)
    ax.set_yticks(range(len(groups)), groups, fontsize=7)
    ax.set_title("claim status by group (worst across partitions)")
    ax.legend(
        handles=[Patch(color=c, label=n) for c, n in zip(_STATUS_COLORS, _STATUS_NAMES)],
        loc="upper left",
        bbox_to_anchor=(1.02, 1.0),
        fontsize=8,
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_timing_chart(reports: Sequence, path: str | Path) -> None:
    """Total verification time per claim."""
    totals: dict[str, float] = {}
    for r in reports:
        totals[r.claim_id] = totals.get(r.claim_id, 0.0) + r.timing_ms
    claims = _claim_order(reports)
    values = [totals[c] for c in claims]

    fig, ax = plt.subplots(figsize=(6.0, max(2.0, 0.32 * len(claims) + 1.0)))
    ax.barh(range(len(claims)), values, color="#4878a8")
    ax.set_yticks(range(len(claims)), claims, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("total time (ms)")
    ax.set_title("verification time by claim")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _claim_order(reports: Sequence) -> list[str]:
    from .harness import CLAIM_IDS

    present = {r.claim_id for r in reports}
    return [c for c in CLAIM_IDS if c in present]


def render_report_figures(reports: Sequence, outdir: str | Path) -> list[str]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    if not reports:
        return []
    matrix = out / "status_matrix.png"
    timing = out / "timing_by_claim.png"
    render_status_matrix(reports, matrix)
    render_timing_chart(reports, timing)
    return [str(matrix), str(timing)]
