"""Command-line entry point: train, evaluate, rollout.

Configuration resolves in three layers: built-in defaults (the reference
engagement and hyperparameter tables), then a flat key-value JSON config
file (--config), then individual flag overrides. The effective config is
echoed into the output directory so every run is self-describing.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass

from .dqn import TrainConfig, train, write_test_log, write_train_log
from .env import EnvConfig, PursuitEnv, WorldState
from .evaluation import build_suite, evaluate, play_case, save_report_json
from .geometry import Pose, SectorSpec
from .nn import load_checkpoint, save_checkpoint


@dataclass
class RunConfig:
    """Flat union of environment and training parameters plus run plumbing."""

    seed: int = 0
    out: str = "runs"
    checkpoint: str | None = None
    export_trajectories: bool = False
    # environment
    rl_speeds: tuple[float, ...] = (0.05, 0.1)
    rl_turns: tuple[float, ...] = (-math.pi / 6, -math.pi / 12, 0.0, math.pi / 12, math.pi / 6)
    gs_speed: float = 0.1
    gs_turn_limit: float = math.pi / 6
    targeting_range: float = 0.25
    targeting_angle: float = math.pi / 6
    dt: float = 1.0
    max_steps: int = 100
    init_pos_stddev: float = 0.5
    # training
    gamma: float = 0.99
    batch_size: int = 32
    learning_rate: float = 1e-4
    weight_decay: float = 1e-5
    final_epsilon: float = 0.02
    epsilon_decay_frames: int = 100_000
    warmup_frames: int = 10_000
    target_sync_frames: int = 1_000
    test_every_frames: int = 25_000
    max_frames: int = 2_000_000
    buffer_size: int = 100_000
    post_perfect_frames: int = 0

    def env_config(self) -> EnvConfig:
        return EnvConfig(
            rl_speeds=tuple(self.rl_speeds),
            rl_turns=tuple(self.rl_turns),
            gs_speed=self.gs_speed,
            gs_turn_limit=self.gs_turn_limit,
            targeting=SectorSpec(range=self.targeting_range, angle=self.targeting_angle),
            dt=self.dt,
            max_steps=self.max_steps,
            init_pos_stddev=self.init_pos_stddev,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            gamma=self.gamma,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            weight_decay=self.weight_decay,
            final_epsilon=self.final_epsilon,
            epsilon_decay_frames=self.epsilon_decay_frames,
            warmup_frames=self.warmup_frames,
            target_sync_frames=self.target_sync_frames,
            test_every_frames=self.test_every_frames,
            max_frames=self.max_frames,
            buffer_capacity=self.buffer_size,
            seed=self.seed,
            post_perfect_frames=self.post_perfect_frames,
        )


# flag name -> RunConfig field (kebab-case flags, a few conventional shorthands)
_FLAG_FIELDS = {
    "seed": ("seed", int),
    "out": ("out", str),
    "checkpoint": ("checkpoint", str),
    "max_frames": ("max_frames", int),
    "test_every": ("test_every_frames", int),
    "epsilon_decay_frames": ("epsilon_decay_frames", int),
    "lr": ("learning_rate", float),
    "gamma": ("gamma", float),
    "batch_size": ("batch_size", int),
    "buffer_size": ("buffer_size", int),
    "weight_decay": ("weight_decay", float),
    "target_sync": ("target_sync_frames", int),
    "warmup": ("warmup_frames", int),
    "post_perfect_frames": ("post_perfect_frames", int),
}


def load_run_config(config_path: str | None, args: argparse.Namespace) -> RunConfig:
    """Defaults, then config-file values, then flag overrides."""
    cfg = RunConfig()
    valid = {f.name for f in dataclasses.fields(RunConfig)}
    if config_path is not None:
        with open(config_path) as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise ValueError("config file must hold a JSON object")
        for key, value in doc.items():
            if key not in valid:
                raise ValueError(f"unknown config key {key!r}")
            if key in ("rl_speeds", "rl_turns"):
                value = tuple(value)
            setattr(cfg, key, value)
    for flag, (name, _) in _FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, name, value)
    if getattr(args, "export_trajectories", False):
        cfg.export_trajectories = True
    return cfg


def echo_config(cfg: RunConfig) -> None:
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, "effective_config.json"), "w") as fh:
        json.dump(dataclasses.asdict(cfg), fh, indent=2)


def cmd_train(cfg: RunConfig) -> int:
    echo_config(cfg)
    out = cfg.out

    def on_test(frame, report, net):
        print(f"frame {frame}: test wins {report.wins}/{len(report.per_case)}")
        save_checkpoint(net, os.path.join(out, f"checkpoint_{frame}.json"), cfg.seed, frame)

    result = train(cfg.train_config(), cfg.env_config(), on_test=on_test)
    write_train_log(os.path.join(out, "train_log.csv"), result.log)
    write_test_log(os.path.join(out, "test_log.csv"), result.log)
    final_frame = result.log.final_frame
    save_checkpoint(result.net, os.path.join(out, f"checkpoint_{final_frame}.json"), cfg.seed, final_frame)
    if result.log.perfect_frame is None:
        print(f"no perfect test score within {cfg.max_frames} frames")
        return 2
    print(f"perfect test score at frame {result.log.perfect_frame}")
    return 0


def _load_policy(cfg: RunConfig):
    if cfg.checkpoint is None:
        raise ValueError("--checkpoint is required")
    net, _ = load_checkpoint(cfg.checkpoint)
    env = PursuitEnv(cfg.env_config())
    if net.dims[0] != 3 or net.dims[-1] != env.n_actions:
        raise ValueError(
            f"checkpoint architecture {list(net.dims)} does not fit a 3-input, "
            f"{env.n_actions}-action policy"
        )
    return net, env


def _parse_case_ids(args: argparse.Namespace, suite_size: int) -> list[int] | None:
    raw: list[int] = []
    if getattr(args, "case", None) is not None:
        raw.append(args.case)
    if getattr(args, "cases", None) is not None:
        raw.extend(int(tok) for tok in args.cases.split(",") if tok.strip())
    if not raw:
        return None
    for cid in raw:
        if not 0 <= cid < suite_size:
            raise ValueError(f"case id {cid} out of range 0..{suite_size - 1}")
    return raw


def cmd_evaluate(cfg: RunConfig, args: argparse.Namespace) -> int:
    net, env = _load_policy(cfg)
    suite = build_suite()
    ids = _parse_case_ids(args, len(suite))
    if ids is not None:
        suite = [suite[i] for i in ids]
    echo_config(cfg)
    report = evaluate(net, suite, env.config, record_trajectories=cfg.export_trajectories)
    save_report_json(report, os.path.join(cfg.out, "eval_report.json"))
    if cfg.export_trajectories:
        from .env import write_trajectory_csv

        for cid, rows in report.trajectories.items():
            write_trajectory_csv(os.path.join(cfg.out, f"traj_{cid}.csv"), rows)
    print(
        f"wins: {report.wins}/{len(suite)} "
        f"(losses {report.losses}, mutual {report.mutual}, timeouts {report.timeouts})"
    )
    return 0


def cmd_rollout(cfg: RunConfig, args: argparse.Namespace) -> int:
    net, env = _load_policy(cfg)
    if args.init is not None:
        vals = [float(tok) for tok in args.init.split(",")]
        if len(vals) != 6:
            raise ValueError("--init takes 6 numbers: rl_x,rl_y,rl_heading,gs_x,gs_y,gs_heading")
        init = WorldState(rl=Pose(*vals[:3]), gs=Pose(*vals[3:]))
        label = "custom"
        episode_id = 0
    else:
        if args.case is None:
            raise ValueError("rollout needs --case or --init")
        suite = build_suite()
        if not 0 <= args.case < len(suite):
            raise ValueError(f"case id {args.case} out of range 0..{len(suite) - 1}")
        init = suite[args.case].init
        label = str(args.case)
        episode_id = args.case
    echo_config(cfg)
    verdict, steps, rows = play_case(env, net, init, episode_id=episode_id)
    from .env import write_trajectory_csv

    path = os.path.join(cfg.out, f"traj_{label}.csv")
    write_trajectory_csv(path, rows)
    print(f"verdict: {verdict.value} after {steps} steps ({path})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dogfight2d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="flat JSON config file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int)

    p_train = sub.add_parser("train", help="train the agent and log results")
    add_common(p_train)
    p_train.add_argument("--max-frames", type=int, dest="max_frames")
    p_train.add_argument("--test-every", type=int, dest="test_every")
    p_train.add_argument("--epsilon-decay-frames", type=int, dest="epsilon_decay_frames")
    p_train.add_argument("--lr", type=float, dest="lr")
    p_train.add_argument("--gamma", type=float, dest="gamma")
    p_train.add_argument("--batch-size", type=int, dest="batch_size")
    p_train.add_argument("--buffer-size", type=int, dest="buffer_size")
    p_train.add_argument("--weight-decay", type=float, dest="weight_decay")
    p_train.add_argument("--target-sync", type=int, dest="target_sync")
    p_train.add_argument("--warmup", type=int, dest="warmup")
    p_train.add_argument("--post-perfect-frames", type=int, dest="post_perfect_frames")

    p_eval = sub.add_parser("evaluate", help="run the fixed test suite on a checkpoint")
    add_common(p_eval)
    p_eval.add_argument("--checkpoint")
    p_eval.add_argument("--case", type=int)
    p_eval.add_argument("--cases", help="comma-separated case ids")
    p_eval.add_argument("--export-trajectories", action="store_true", dest="export_trajectories")

    p_roll = sub.add_parser("rollout", help="play one episode and export its trajectory")
    add_common(p_roll)
    p_roll.add_argument("--checkpoint")
    p_roll.add_argument("--case", type=int)
    p_roll.add_argument("--init", help="custom start: rl_x,rl_y,rl_heading,gs_x,gs_y,gs_heading")
    p_roll.add_argument("--export-trajectories", action="store_true", dest="export_trajectories")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_run_config(args.config, args)
        if args.command == "train":
            return cmd_train(cfg)
        if args.command == "evaluate":
            return cmd_evaluate(cfg, args)
        return cmd_rollout(cfg, args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
