"""Figure builders: engagement trajectories and training/testing curves.

Output style is frozen: 150 dpi PNG, the trainable agent in blue, the
shooter in red, one marker per time step, equal-aspect axes.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.figure import Figure

from .io import TrajectoryRecord

DPI = 150
RL_COLOR = "tab:blue"
GS_COLOR = "tab:red"


def trajectory_figure(records: list[TrajectoryRecord]) -> Figure:
    """One engagement: both agents' paths with per-step markers and annotated
    start poses."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    rl_x = [r.rl_x for r in records]
    rl_y = [r.rl_y for r in records]
    gs_x = [r.gs_x for r in records]
    gs_y = [r.gs_y for r in records]
    ax.plot(rl_x, rl_y, color=RL_COLOR, marker="o", markersize=4, linewidth=1.0, label="RL")
    ax.plot(gs_x, gs_y, color=GS_COLOR, marker="o", markersize=4, linewidth=1.0, label="GS")

    span = max(
        max(rl_x + gs_x) - min(rl_x + gs_x), max(rl_y + gs_y) - min(rl_y + gs_y), 0.1
    )
    first = records[0]
    for x, y, heading, color, label in (
        (first.rl_x, first.rl_y, first.rl_heading, RL_COLOR, "RL start"),
        (first.gs_x, first.gs_y, first.gs_heading, GS_COLOR, "GS start"),
    ):
        arrow = 0.12 * span
        ax.annotate(
            "",
            xy=(x + arrow * math.cos(heading), y + arrow * math.sin(heading)),
            xytext=(x, y),
            arrowprops=dict(arrowstyle="-|>", color=color, lw=1.5),
        )
        ax.annotate(label, xy=(x, y), xytext=(4, 4), textcoords="offset points", color=color)

    verdict = records[-1].verdict
    ax.set_title(f"episode {first.episode_id}: {verdict} after {records[-1].step} steps")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    return fig


def curves_figure(
    train_frames: list[int],
    train_smoothed: list[float],
    test_frames: list[int],
    test_fractions: list[float],
) -> Figure:
    """Two panels: smoothed training reward per frame, and test win fraction
    at each evaluation point."""
    fig, (ax_train, ax_test) = plt.subplots(2, 1, figsize=(7.0, 7.0), sharex=True)
    ax_train.plot(train_frames, train_smoothed, color=RL_COLOR, linewidth=1.0)
    ax_train.set_ylabel("training reward (smoothed)")
    ax_train.set_ylim(-0.05, 1.05)
    ax_train.grid(True, alpha=0.3)

    ax_test.plot(test_frames, test_fractions, color=GS_COLOR, marker="o", linewidth=1.0)
    ax_test.set_ylabel("test win fraction")
    ax_test.set_xlabel("frame")
    ax_test.set_ylim(-0.05, 1.05)
    ax_test.grid(True, alpha=0.3)

    fig.tight_layout()
    return fig


def save_figure(fig: Figure, path) -> None:
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
