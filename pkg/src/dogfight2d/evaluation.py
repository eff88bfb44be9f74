"""Fixed test suite, exploration-free policy evaluation, and win metrics.

The suite is a deterministic 5 x 4 x 4 grid: separation {0.5..0.9} m, rl
bearing from the shooter {0, pi/2, pi, 3pi/2}, rl heading {0, pi/2, pi,
3pi/2}, with the shooter always at the origin facing +x (which the
symmetry-reduced observation makes fully general). No case starts inside a
capture: the minimum separation is twice the targeting range.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .env import EnvConfig, PursuitEnv, Verdict, WorldState, trajectory_row
from .geometry import Pose
from .nn import QNetwork, greedy_action

SUITE_SEPARATIONS = (0.5, 0.6, 0.7, 0.8, 0.9)
SUITE_BEARINGS = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)
SUITE_HEADINGS = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)
SUITE_SIZE = len(SUITE_SEPARATIONS) * len(SUITE_BEARINGS) * len(SUITE_HEADINGS)


@dataclass(frozen=True)
class TestCase:
    id: int
    init: WorldState


@dataclass(frozen=True)
class CaseResult:
    case_id: int
    verdict: Verdict
    steps: int


@dataclass
class EvalReport:
    wins: int = 0
    losses: int = 0
    mutual: int = 0
    timeouts: int = 0
    per_case: list[CaseResult] = field(default_factory=list)
    mean_win_length: float | None = None
    trajectories: dict[int, list[tuple]] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "wins": self.wins,
            "losses": self.losses,
            "mutual": self.mutual,
            "timeouts": self.timeouts,
            "mean_win_length": self.mean_win_length,
            "cases": [
                {"id": r.case_id, "verdict": r.verdict.value, "steps": r.steps}
                for r in self.per_case
            ],
        }


def build_suite() -> list[TestCase]:
    """The 80 fixed initializations, id ordered separation-major, then
    bearing, then heading."""
    cases = []
    for d in SUITE_SEPARATIONS:
        for beta in SUITE_BEARINGS:
            for theta in SUITE_HEADINGS:
                rl = Pose(d * math.cos(beta), d * math.sin(beta), theta)
                cases.append(TestCase(id=len(cases), init=WorldState(rl=rl, gs=Pose(0.0, 0.0, 0.0))))
    return cases


def play_case(
    env: PursuitEnv, net: QNetwork, init: WorldState, episode_id: int = 0
) -> tuple[Verdict, int, list[tuple]]:
    """Run one episode greedily from ``init``; returns the final verdict, the
    episode length in steps, and the trajectory rows (initial row included)."""
    state, obs = env.reset_fixed(init)
    rows = [trajectory_row(episode_id, state)]
    verdict = Verdict.ONGOING
    while verdict is Verdict.ONGOING:
        a = greedy_action(net, obs)
        state, outcome = env.step(state, env.actions[a])
        rows.append(trajectory_row(episode_id, state, a, outcome.reward, outcome.verdict))
        obs = outcome.observation
        verdict = outcome.verdict
    return verdict, state.step_count, rows


def evaluate(
    net: QNetwork,
    suite: list[TestCase] | None = None,
    config: EnvConfig | None = None,
    record_trajectories: bool = False,
) -> EvalReport:
    """Greedy evaluation over the suite; fully deterministic for a given net."""
    if suite is None:
        suite = build_suite()
    env = PursuitEnv(config)
    report = EvalReport()
    win_lengths = []
    for case in suite:
        verdict, steps, rows = play_case(env, net, case.init, episode_id=case.id)
        report.per_case.append(CaseResult(case.id, verdict, steps))
        if verdict is Verdict.RL_WIN:
            report.wins += 1
            win_lengths.append(steps)
        elif verdict is Verdict.RL_LOSS:
            report.losses += 1
        elif verdict is Verdict.MUTUAL_CAPTURE:
            report.mutual += 1
        else:
            report.timeouts += 1
        if record_trajectories:
            report.trajectories[case.id] = rows
    if win_lengths:
        report.mean_win_length = sum(win_lengths) / len(win_lengths)
    return report


def save_report_json(report: EvalReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2)


def smooth_rewards(rewards: list[float], window: int = 100) -> list[float]:
    """Trailing mean: element i averages rewards[max(0, i-window+1) ..= i]."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    out = []
    acc = 0.0
    for i, r in enumerate(rewards):
        acc += r
        if i >= window:
            acc -= rewards[i - window]
        out.append(acc / min(i + 1, window))
    return out
