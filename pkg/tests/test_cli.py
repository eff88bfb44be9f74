"""CLI behaviour: config layering, file outputs, and exit codes."""

import json
import math
import os

import numpy as np
import pytest

from dogfight2d.cli import RunConfig, main
from dogfight2d.nn import QNetwork, save_checkpoint

TURNS = (-math.pi / 6, -math.pi / 12, 0.0, math.pi / 12, math.pi / 6)


def straight_fast_net() -> QNetwork:
    """Constant policy that always picks action 7 (turn 0, speed 0.1)."""
    bias = np.zeros(10)
    bias[7] = 1.0
    return QNetwork([np.zeros((4, 3)), np.zeros((10, 4))], [np.zeros(4), bias])


@pytest.fixture
def checkpoint(tmp_path):
    path = tmp_path / "policy.json"
    save_checkpoint(straight_fast_net(), path, seed=0, frame_count=0)
    return str(path)


class TestDefaults:
    def test_defaults_match_reference_tables(self):
        cfg = RunConfig()
        assert cfg.rl_speeds == (0.05, 0.1)
        assert cfg.rl_turns == TURNS
        assert cfg.gs_speed == 0.1
        assert cfg.gs_turn_limit == math.pi / 6
        assert cfg.targeting_range == 0.25
        assert cfg.targeting_angle == math.pi / 6
        assert cfg.dt == 1.0
        assert cfg.max_steps == 100
        assert cfg.init_pos_stddev == 0.5
        assert cfg.learning_rate == 1e-4
        assert cfg.weight_decay == 1e-5
        assert cfg.gamma == 0.99
        assert cfg.batch_size == 32
        assert cfg.buffer_size == 100_000
        assert cfg.final_epsilon == 0.02
        assert cfg.test_every_frames == 25_000


class TestTrainCommand:
    def test_short_run_writes_outputs_and_exits_2(self, tmp_path, capsys):
        out = tmp_path / "run"
        rc = main(
            ["train", "--seed", "7", "--out", str(out), "--max-frames", "1000", "--warmup", "200"]
        )
        assert rc == 2
        assert (out / "train_log.csv").exists()
        assert (out / "test_log.csv").exists()
        assert (out / "effective_config.json").exists()
        assert (out / "checkpoint_1000.json").exists()
        assert "no perfect test score" in capsys.readouterr().out

    def test_effective_config_echo(self, tmp_path):
        out = tmp_path / "run"
        main(["train", "--seed", "3", "--out", str(out), "--max-frames", "100", "--warmup", "50"])
        doc = json.loads((out / "effective_config.json").read_text())
        assert doc["seed"] == 3
        assert doc["max_frames"] == 100
        assert doc["gamma"] == 0.99
        assert doc["learning_rate"] == 1e-4
        assert doc["buffer_size"] == 100_000
        assert doc["targeting_range"] == 0.25

    def test_config_file_then_flag_overrides(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"learning_rate": 5e-4, "max_frames": 100, "warmup_frames": 50, "seed": 1}))
        out = tmp_path / "run"
        rc = main(["train", "--config", str(cfg_path), "--out", str(out), "--lr", "2e-4"])
        assert rc == 2
        doc = json.loads((out / "effective_config.json").read_text())
        assert doc["learning_rate"] == 2e-4
        assert doc["max_frames"] == 100

    def test_unknown_config_key_errors(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"learning_rte": 1e-3}))
        rc = main(["train", "--config", str(cfg_path), "--out", str(tmp_path / "x")])
        assert rc == 1
        assert "unknown config key" in capsys.readouterr().err

    def test_unreadable_config_errors(self, tmp_path):
        rc = main(["train", "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path)])
        assert rc == 1


class TestEvaluateCommand:
    def test_subset_evaluation(self, tmp_path, checkpoint, capsys):
        out = tmp_path / "eval"
        rc = main(
            ["evaluate", "--checkpoint", checkpoint, "--out", str(out), "--cases", "0,5,17"]
        )
        assert rc == 0
        doc = json.loads((out / "eval_report.json").read_text())
        assert len(doc["cases"]) == 3
        assert [c["id"] for c in doc["cases"]] == [0, 5, 17]
        assert "/3" in capsys.readouterr().out

    def test_export_trajectories(self, tmp_path, checkpoint):
        out = tmp_path / "eval"
        rc = main(
            [
                "evaluate",
                "--checkpoint",
                checkpoint,
                "--out",
                str(out),
                "--cases",
                "2,9",
                "--export-trajectories",
            ]
        )
        assert rc == 0
        assert (out / "traj_2.csv").exists()
        assert (out / "traj_9.csv").exists()

    def test_corrupted_checkpoint_errors(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        rc = main(["evaluate", "--checkpoint", str(bad), "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_architecture_mismatch_errors(self, tmp_path, capsys):
        wrong = tmp_path / "wrong.json"
        save_checkpoint(QNetwork.initialize(np.random.default_rng(0), (3, 8, 8)), wrong)
        rc = main(["evaluate", "--checkpoint", str(wrong), "--out", str(tmp_path / "o")])
        assert rc == 1
        assert "architecture" in capsys.readouterr().err

    def test_missing_checkpoint_flag_errors(self, tmp_path):
        assert main(["evaluate", "--out", str(tmp_path / "o")]) == 1

    def test_bad_case_id_errors(self, tmp_path, checkpoint):
        rc = main(
            ["evaluate", "--checkpoint", checkpoint, "--out", str(tmp_path / "o"), "--case", "80"]
        )
        assert rc == 1


class TestRolloutCommand:
    def test_suite_case_rollout(self, tmp_path, checkpoint, capsys):
        out = tmp_path / "roll"
        rc = main(["rollout", "--checkpoint", checkpoint, "--out", str(out), "--case", "0"])
        assert rc == 0
        assert (out / "traj_0.csv").exists()
        assert "verdict:" in capsys.readouterr().out

    def test_rollout_is_byte_deterministic(self, tmp_path, checkpoint):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["rollout", "--checkpoint", checkpoint, "--out", str(out_a), "--case", "12"])
        main(["rollout", "--checkpoint", checkpoint, "--out", str(out_b), "--case", "12"])
        assert (out_a / "traj_12.csv").read_bytes() == (out_b / "traj_12.csv").read_bytes()

    def test_custom_init_mutual_capture(self, tmp_path, checkpoint, capsys):
        # nose-to-nose at 0.4 m with a straight-ahead policy: both agents end
        # step 1 inside each other's zones
        out = tmp_path / "roll"
        rc = main(
            [
                "rollout",
                "--checkpoint",
                checkpoint,
                "--out",
                str(out),
                "--init",
                f"0,0,0,0.4,0,{math.pi}",
            ]
        )
        assert rc == 0
        assert "mutual_capture after 1 steps" in capsys.readouterr().out
        assert (out / "traj_custom.csv").exists()

    def test_invalid_case_id_errors(self, tmp_path, checkpoint, capsys):
        rc = main(["rollout", "--checkpoint", checkpoint, "--out", str(tmp_path / "o"), "--case", "99"])
        assert rc == 1
        assert "out of range" in capsys.readouterr().err

    def test_missing_case_and_init_errors(self, tmp_path, checkpoint):
        assert main(["rollout", "--checkpoint", checkpoint, "--out", str(tmp_path / "o")]) == 1

    def test_malformed_init_errors(self, tmp_path, checkpoint):
        rc = main(
            ["rollout", "--checkpoint", checkpoint, "--out", str(tmp_path / "o"), "--init", "1,2"]
        )
        assert rc == 1


class TestOutputContainment:
    def test_all_outputs_live_under_out_dir(self, tmp_path, checkpoint):
        out = tmp_path / "only_here"
        before = set(os.listdir(tmp_path))
        main(
            [
                "evaluate",
                "--checkpoint",
                checkpoint,
                "--out",
                str(out),
                "--cases",
                "0,1",
                "--export-trajectories",
            ]
        )
        created = set(os.listdir(tmp_path)) - before
        assert created == {"only_here"}
        assert set(os.listdir(out)) == {
            "effective_config.json",
            "eval_report.json",
            "traj_0.csv",
            "traj_1.csv",
        }
