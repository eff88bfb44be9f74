"""Command-line wrappers: plot-traj IN.csv OUT.png and
plot-curves TRAIN.csv TEST.csv OUT.png."""

from __future__ import annotations

import argparse
import sys

from .figures import curves_figure, save_figure, trajectory_figure
from .io import read_test_log, read_train_log, read_trajectory


def main_traj(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="plot-traj", description="render one trajectory CSV")
    parser.add_argument("traj_csv")
    parser.add_argument("out_png")
    args = parser.parse_args(argv)
    try:
        records = read_trajectory(args.traj_csv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    save_figure(trajectory_figure(records), args.out_png)
    print(f"wrote {args.out_png} ({len(records)} steps)")
    return 0


def main_curves(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-curves", description="render training/testing curves"
    )
    parser.add_argument("train_csv")
    parser.add_argument("test_csv")
    parser.add_argument("out_png")
    args = parser.parse_args(argv)
    try:
        train_frames, train_smoothed = read_train_log(args.train_csv)
        test_frames, test_fractions = read_test_log(args.test_csv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    save_figure(curves_figure(train_frames, train_smoothed, test_frames, test_fractions), args.out_png)
    print(f"wrote {args.out_png} ({len(test_frames)} test points)")
    return 0


if __name__ == "__main__":
    sys.exit(main_traj())
