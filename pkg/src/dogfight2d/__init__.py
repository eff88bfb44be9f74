"""2D pursuit-evasion dogfight: a deep Q-learning agent versus a
pure-pursuit greedy shooter."""

from .dqn import ReplayBuffer, TrainConfig, Transition, bellman_targets, epsilon_at, select_action, train
from .env import Action, EnvConfig, PursuitEnv, StepOutcome, Verdict, WorldState
from .evaluation import EvalReport, TestCase, build_suite, evaluate, smooth_rewards
from .geometry import Pose, SectorSpec, in_sector, normalize_angle, to_relative_frame
from .nn import AdamOptimizer, QNetwork, backward, load_checkpoint, masked_mse, save_checkpoint

__all__ = [
    "Action",
    "AdamOptimizer",
    "EnvConfig",
    "EvalReport",
    "Pose",
    "PursuitEnv",
    "QNetwork",
    "ReplayBuffer",
    "SectorSpec",
    "StepOutcome",
    "TestCase",
    "TrainConfig",
    "Transition",
    "Verdict",
    "WorldState",
    "backward",
    "bellman_targets",
    "build_suite",
    "epsilon_at",
    "evaluate",
    "in_sector",
    "load_checkpoint",
    "masked_mse",
    "normalize_angle",
    "save_checkpoint",
    "select_action",
    "smooth_rewards",
    "to_relative_frame",
    "train",
]
