"""CSV readers for the simulator's export schemas, with validation.

Consumes three file formats produced by the dogfight2d batch commands:
per-step trajectories, the per-episode training log, and the per-evaluation
test log. Parsing is strict; malformed files raise ValueError.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

TRAJECTORY_HEADER = [
    "episode_id",
    "step",
    "rl_x",
    "rl_y",
    "rl_heading",
    "gs_x",
    "gs_y",
    "gs_heading",
    "rl_action_index",
    "reward",
    "verdict",
]
TRAIN_LOG_HEADER = ["frame", "episode", "reward", "smoothed_reward"]
TEST_LOG_HEADER = ["frame", "test_wins_of_80"]


@dataclass(frozen=True)
class TrajectoryRecord:
    episode_id: int
    step: int
    rl_x: float
    rl_y: float
    rl_heading: float
    gs_x: float
    gs_y: float
    gs_heading: float
    rl_action_index: int
    reward: float
    verdict: str


def _read_rows(path, expected_header: list[str]) -> list[list[str]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    if rows[0] != expected_header:
        raise ValueError(f"{path}: expected header {expected_header}, got {rows[0]}")
    if len(rows) < 2:
        raise ValueError(f"{path}: no data rows")
    return rows[1:]


def read_trajectory(path) -> list[TrajectoryRecord]:
    """Parse one trajectory. Steps must count up from 0 and only the final
    row may carry a decided verdict."""
    records = []
    for row in _read_rows(path, TRAJECTORY_HEADER):
        try:
            records.append(
                TrajectoryRecord(
                    episode_id=int(row[0]),
                    step=int(row[1]),
                    rl_x=float(row[2]),
                    rl_y=float(row[3]),
                    rl_heading=float(row[4]),
                    gs_x=float(row[5]),
                    gs_y=float(row[6]),
                    gs_heading=float(row[7]),
                    rl_action_index=int(row[8]),
                    reward=float(row[9]),
                    verdict=row[10],
                )
            )
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}: bad trajectory row {row}: {exc}") from exc
    for i, rec in enumerate(records):
        if rec.step != i:
            raise ValueError(f"{path}: steps must increase from 0, got {rec.step} at row {i}")
        if rec.verdict != "ongoing" and i != len(records) - 1:
            raise ValueError(f"{path}: verdict {rec.verdict!r} before the final row")
    return records


def read_train_log(path) -> tuple[list[int], list[float]]:
    """Training log as (frames, smoothed rewards)."""
    frames, smoothed = [], []
    for row in _read_rows(path, TRAIN_LOG_HEADER):
        try:
            frames.append(int(row[0]))
            smoothed.append(float(row[3]))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}: bad training-log row {row}: {exc}") from exc
    return frames, smoothed


def read_test_log(path) -> tuple[list[int], list[float]]:
    """Test log as (frames, win fractions of the 80-case suite)."""
    frames, fractions = [], []
    for row in _read_rows(path, TEST_LOG_HEADER):
        try:
            frames.append(int(row[0]))
            fractions.append(int(row[1]) / 80.0)
        except (ValueError, IndexError) as exc:
            raise ValueError(f"{path}: bad test-log row {row}: {exc}") from exc
    return frames, fractions
