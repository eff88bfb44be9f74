"""Pursuit-evasion MDP between a trainable agent ("rl") and a greedy shooter
("gs") that flies pure pursuit.

Dynamics of one time step: both agents pick their turn from the start-of-step
state, headings update instantaneously, then each agent translates
speed * dt in a straight line along its new heading. Capture is evaluated on
the end-of-step poses only, so an episode that starts with overlapping
targeting zones is not terminal until a step has been taken.

Environment objects hold configuration only; all state lives in the
WorldState values passed in and out, so one instance can serve any number of
concurrent episodes.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import Pose, SectorSpec, bearing_to, in_sector, normalize_angle, to_relative_frame

TURN_CHOICES = (-math.pi / 6, -math.pi / 12, 0.0, math.pi / 12, math.pi / 6)
SPEED_CHOICES = (0.05, 0.1)


@dataclass(frozen=True)
class Action:
    """One agent command: turn angle (rad) and speed (m/s) for the step."""

    turn: float
    speed: float


@dataclass(frozen=True)
class WorldState:
    rl: Pose
    gs: Pose
    step_count: int = 0

    def __post_init__(self) -> None:
        if self.step_count < 0:
            raise ValueError(f"step_count must be >= 0, got {self.step_count}")


class Verdict(enum.Enum):
    ONGOING = "ongoing"
    RL_WIN = "rl_win"
    RL_LOSS = "rl_loss"
    MUTUAL_CAPTURE = "mutual_capture"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class StepOutcome:
    observation: np.ndarray
    reward: float
    terminal: bool
    verdict: Verdict


@dataclass
class EnvConfig:
    """Dynamics parameters. Defaults are the reference engagement setup:
    two speeds / five turns for the trainable agent, a fixed-speed shooter
    with a clamped continuous turn, and a 0.25 m x pi/6 targeting sector."""

    rl_speeds: tuple[float, ...] = SPEED_CHOICES
    rl_turns: tuple[float, ...] = TURN_CHOICES
    gs_speed: float = 0.1
    gs_turn_limit: float = math.pi / 6
    targeting: SectorSpec = field(default_factory=SectorSpec)
    dt: float = 1.0
    max_steps: int = 100
    init_pos_stddev: float = 0.5

    def action_table(self) -> tuple[Action, ...]:
        """The discrete action set, indexed speed-major then turn-minor."""
        return tuple(Action(t, s) for s in self.rl_speeds for t in self.rl_turns)


class PursuitEnv:
    """The pursuit-evasion game as an explicit-state step/reset machine."""

    def __init__(self, config: EnvConfig | None = None):
        self.config = config if config is not None else EnvConfig()
        self.actions = self.config.action_table()

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    def reset_random(self, rng: np.random.Generator) -> tuple[WorldState, np.ndarray]:
        """Fresh episode: shooter at the origin facing +x, trainable agent at
        a bivariate normal position with uniformly random heading."""
        cfg = self.config
        x = rng.normal(0.0, cfg.init_pos_stddev)
        y = rng.normal(0.0, cfg.init_pos_stddev)
        heading = rng.uniform(-math.pi, math.pi)
        state = WorldState(rl=Pose(x, y, heading), gs=Pose(0.0, 0.0, 0.0))
        return state, self.observe(state)

    def reset_fixed(self, init: WorldState) -> tuple[WorldState, np.ndarray]:
        """Fresh episode from an exact initial state (step_count must be 0)."""
        if init.step_count != 0:
            raise ValueError(f"initial state must have step_count 0, got {init.step_count}")
        return init, self.observe(init)

    def observe(self, state: WorldState) -> np.ndarray:
        """Symmetry-reduced view: the rl pose in the frame where the shooter
        sits at the origin with heading 0."""
        return to_relative_frame(state.gs, state.rl)

    def gs_policy(self, state: WorldState) -> Action:
        """Pure pursuit: turn toward the rl agent's start-of-step position,
        clamped to the turn limit, at the shooter's fixed speed."""
        cfg = self.config
        gs = state.gs
        if state.rl.x == gs.x and state.rl.y == gs.y:
            return Action(0.0, cfg.gs_speed)
        desired = normalize_angle(bearing_to(gs, state.rl.x, state.rl.y) - gs.heading)
        turn = min(max(desired, -cfg.gs_turn_limit), cfg.gs_turn_limit)
        return Action(turn, cfg.gs_speed)

    def is_terminal(self, state: WorldState) -> bool:
        """Whether an episode ended at this state. Capture only counts once a
        step has been taken; a time-expired state is terminal regardless."""
        if state.step_count >= self.config.max_steps:
            return True
        if state.step_count == 0:
            return False
        return self._verdict(state) is not Verdict.ONGOING

    def step(self, state: WorldState, rl_action: Action) -> tuple[WorldState, StepOutcome]:
        """Advance one time step with simultaneous moves.

        Both agents turn based on the start-of-step state, then translate
        along their new headings. The rl action must come from the discrete
        action set; the shooter plays its fixed policy.
        """
        if self.is_terminal(state):
            raise ValueError("cannot step a terminal state")
        cfg = self.config
        gs_action = self.gs_policy(state)
        rl_pose = state.rl.moved(rl_action.turn, rl_action.speed * cfg.dt)
        gs_pose = state.gs.moved(gs_action.turn, gs_action.speed * cfg.dt)
        new_state = WorldState(rl=rl_pose, gs=gs_pose, step_count=state.step_count + 1)

        verdict = self._verdict(new_state)
        if verdict is Verdict.ONGOING and new_state.step_count >= cfg.max_steps:
            verdict = Verdict.TIMEOUT
        reward = 1.0 if verdict is Verdict.RL_WIN else 0.0
        outcome = StepOutcome(
            observation=self.observe(new_state),
            reward=reward,
            terminal=verdict is not Verdict.ONGOING,
            verdict=verdict,
        )
        return new_state, outcome

    def _verdict(self, state: WorldState) -> Verdict:
        """Capture verdict for a set of poses. A win requires holding the
        opponent in one's own zone while staying out of the opponent's."""
        zone = self.config.targeting
        rl_captures = in_sector(state.rl, (state.gs.x, state.gs.y), zone)
        gs_captures = in_sector(state.gs, (state.rl.x, state.rl.y), zone)
        if rl_captures and gs_captures:
            return Verdict.MUTUAL_CAPTURE
        if rl_captures:
            return Verdict.RL_WIN
        if gs_captures:
            return Verdict.RL_LOSS
        return Verdict.ONGOING


# One row per time step. Row 0 is the initial state (action index -1, reward
# 0, verdict ongoing); row k >= 1 records the state reached by step k together
# with the action taken during that step and the step's reward/verdict.
TRAJECTORY_HEADER = (
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
)


def trajectory_row(
    episode_id: int,
    state: WorldState,
    rl_action_index: int = -1,
    reward: float = 0.0,
    verdict: Verdict = Verdict.ONGOING,
) -> tuple:
    return (
        episode_id,
        state.step_count,
        state.rl.x,
        state.rl.y,
        state.rl.heading,
        state.gs.x,
        state.gs.y,
        state.gs.heading,
        rl_action_index,
        reward,
        verdict.value,
    )


def write_trajectory_csv(path, rows: Iterable[Sequence]) -> None:
    """Write trajectory rows in the exchange schema (TRAJECTORY_HEADER)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRAJECTORY_HEADER)
        writer.writerows(rows)
