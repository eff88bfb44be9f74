"""Batch figure generation from dogfight2d CSV exports."""

from .figures import curves_figure, save_figure, trajectory_figure
from .io import TrajectoryRecord, read_test_log, read_train_log, read_trajectory

__all__ = [
    "TrajectoryRecord",
    "curves_figure",
    "read_test_log",
    "read_train_log",
    "read_trajectory",
    "save_figure",
    "trajectory_figure",
]
