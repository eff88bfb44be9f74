"""Deep Q-learning loop: replay buffer, epsilon-greedy exploration, Bellman
targets against a periodically synchronized target network, and the
frame-driven train/test cadence.

Reproducibility: a single integer seed is split with
``numpy.random.SeedSequence(seed).spawn(4)`` into four independent child
streams, consumed in this fixed order: weight initialization, environment
resets, exploration, batch sampling. Within a frame the order of operations
is pinned (act, store, learn, sync, test), so runs with equal seeds produce
bit-identical logs.
"""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .env import EnvConfig, PursuitEnv
from .evaluation import SUITE_SIZE, EvalReport, build_suite, evaluate
from .nn import AdamOptimizer, QNetwork, backward, greedy_action


@dataclass
class Transition:
    """One replay record. Rewards are terminal-only, so reward 1 implies the
    transition ended its episode."""

    obs: np.ndarray
    action_index: int
    reward: float
    next_obs: np.ndarray
    terminal: bool

    def __post_init__(self) -> None:
        if self.reward == 1.0 and not self.terminal:
            raise ValueError("reward 1 on a non-terminal transition")


class ReplayBuffer:
    """Fixed-capacity ring store; once full, the oldest entries are
    overwritten first. Sampling is uniform with replacement."""

    def __init__(self, capacity: int = 100_000, obs_dim: int = 3):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self.obs = np.zeros((capacity, obs_dim), dtype=np.float64)
        self.next_obs = np.zeros((capacity, obs_dim), dtype=np.float64)
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.rewards = np.zeros(capacity, dtype=np.float64)
        self.terminals = np.zeros(capacity, dtype=bool)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, tr: Transition) -> None:
        i = self._next
        self.obs[i] = tr.obs
        self.next_obs[i] = tr.next_obs
        self.actions[i] = tr.action_index
        self.rewards[i] = tr.reward
        self.terminals[i] = tr.terminal
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> list[Transition]:
        if self._size == 0:
            raise ValueError("cannot sample from an empty buffer")
        idx = rng.integers(0, self._size, size=batch_size)
        return [
            Transition(
                self.obs[i].copy(),
                int(self.actions[i]),
                float(self.rewards[i]),
                self.next_obs[i].copy(),
                bool(self.terminals[i]),
            )
            for i in idx
        ]


@dataclass
class TrainConfig:
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
    buffer_capacity: int = 100_000
    seed: int = 0
    # keep training this many frames past the first perfect test score
    # (0 = stop at the first 80/80)
    post_perfect_frames: int = 0


def epsilon_at(frame: int, cfg: TrainConfig) -> float:
    """Linear 1.0 -> final_epsilon over the decay horizon, constant after."""
    if frame >= cfg.epsilon_decay_frames:
        return cfg.final_epsilon
    frac = frame / cfg.epsilon_decay_frames
    return 1.0 + (cfg.final_epsilon - 1.0) * frac


def select_action(
    net: QNetwork, obs: np.ndarray, epsilon: float, rng: np.random.Generator | None = None
) -> int:
    """Epsilon-greedy action index. With epsilon 0 the stream is never
    consulted, so greedy evaluation needs no randomness at all."""
    if epsilon > 0.0:
        if rng is None:
            raise ValueError("epsilon > 0 requires a random stream")
        if rng.random() < epsilon:
            return int(rng.integers(0, net.dims[-1]))
    return greedy_action(net, obs)


def bellman_targets(batch: list[Transition], target_net: QNetwork, gamma: float) -> np.ndarray:
    """One-step targets: reward for terminal transitions, else
    reward + gamma * max_a Q_target(next_obs, a)."""
    rewards = np.array([t.reward for t in batch])
    terminal = np.array([t.terminal for t in batch])
    next_obs = np.stack([t.next_obs for t in batch])
    next_best = target_net.forward(next_obs).max(axis=1)
    return np.where(terminal, rewards, rewards + gamma * next_best)


@dataclass(frozen=True)
class EpisodeRecord:
    frame: int
    episode: int
    reward: float
    smoothed: float


@dataclass(frozen=True)
class TestRecord:
    frame: int
    wins: int


@dataclass
class TrainLog:
    episodes: list[EpisodeRecord] = field(default_factory=list)
    tests: list[TestRecord] = field(default_factory=list)
    perfect_frame: int | None = None
    final_frame: int = 0


@dataclass
class TrainResult:
    net: QNetwork
    log: TrainLog


def train(
    cfg: TrainConfig,
    env_config: EnvConfig | None = None,
    on_test: Callable[[int, EvalReport, QNetwork], None] | None = None,
    frame_hook: Callable[[int, QNetwork, QNetwork], None] | None = None,
) -> TrainResult:
    """Run the full training protocol.

    Frames accumulate across episodes; each environment frame past the warmup
    triggers exactly one optimizer step on a uniformly sampled batch. The
    online network is cloned into the target every ``target_sync_frames``,
    and the fixed suite is evaluated greedily every ``test_every_frames``.
    Training stops at the first perfect test score (plus the configured
    post-perfect extension) or at ``max_frames``.
    """
    init_ss, env_ss, explore_ss, sample_ss = np.random.SeedSequence(cfg.seed).spawn(4)
    env_rng = np.random.default_rng(env_ss)
    explore_rng = np.random.default_rng(explore_ss)
    sample_rng = np.random.default_rng(sample_ss)

    env = PursuitEnv(env_config)
    net = QNetwork.initialize(np.random.default_rng(init_ss))
    target = net.clone()
    opt = AdamOptimizer(cfg.learning_rate, cfg.weight_decay)
    buffer = ReplayBuffer(cfg.buffer_capacity)
    suite = build_suite()
    log = TrainLog()

    n_out = net.dims[-1]
    state, obs = env.reset_random(env_rng)
    recent = deque(maxlen=100)
    episode = 0
    frame = 0
    stop_frame = cfg.max_frames

    while frame < stop_frame:
        a = select_action(net, obs, epsilon_at(frame, cfg), explore_rng)
        state, outcome = env.step(state, env.actions[a])
        buffer.push(Transition(obs, a, outcome.reward, outcome.observation, outcome.terminal))
        obs = outcome.observation
        frame += 1

        if outcome.terminal:
            recent.append(outcome.reward)
            log.episodes.append(
                EpisodeRecord(frame, episode, outcome.reward, sum(recent) / len(recent))
            )
            episode += 1
            state, obs = env.reset_random(env_rng)

        if frame > cfg.warmup_frames and len(buffer) >= cfg.batch_size:
            batch = buffer.sample(cfg.batch_size, sample_rng)
            targets = np.zeros((cfg.batch_size, n_out))
            mask = np.zeros((cfg.batch_size, n_out))
            targets[np.arange(cfg.batch_size), [t.action_index for t in batch]] = bellman_targets(
                batch, target, cfg.gamma
            )
            mask[np.arange(cfg.batch_size), [t.action_index for t in batch]] = 1.0
            inputs = np.stack([t.obs for t in batch])
            opt.step(net, backward(net, inputs, targets, mask))

        if frame % cfg.target_sync_frames == 0:
            target = net.clone()

        if frame_hook is not None:
            frame_hook(frame, net, target)

        if frame % cfg.test_every_frames == 0:
            report = evaluate(net, suite, env.config)
            log.tests.append(TestRecord(frame, report.wins))
            if on_test is not None:
                on_test(frame, report, net)
            if report.wins == SUITE_SIZE and log.perfect_frame is None:
                log.perfect_frame = frame
                stop_frame = min(cfg.max_frames, frame + cfg.post_perfect_frames)

    log.final_frame = frame
    return TrainResult(net=net, log=log)


def write_train_log(path, log: TrainLog) -> None:
    """Per-episode CSV: frame, episode, reward, smoothed_reward."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("frame", "episode", "reward", "smoothed_reward"))
        writer.writerows((r.frame, r.episode, r.reward, r.smoothed) for r in log.episodes)


def write_test_log(path, log: TrainLog) -> None:
    """Per-evaluation CSV: frame, test_wins_of_80."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("frame", "test_wins_of_80"))
        writer.writerows((r.frame, r.wins) for r in log.tests)
