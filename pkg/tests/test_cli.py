import json

import pytest
from click.testing import CliRunner

from paired.cli import main
from tests.conftest import FOREST_PAGES, write_bundle


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workspace(tmp_path, runner):
    """A data dir with the forest book ingested."""
    bundle = write_bundle(tmp_path, "forest-walk", "A Forest Walk", FOREST_PAGES)
    data_dir = tmp_path / "data"
    result = runner.invoke(main, ["ingest", str(bundle), "--data-dir", str(data_dir)])
    assert result.exit_code == 0, result.output
    return tmp_path, data_dir


def _generate(runner, data_dir, launch=True):
    args = ["generate", "--book", "forest-walk", "--subject", "math", "--data-dir", str(data_dir)]
    if launch:
        args.append("--launch")
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output
    return result.output.strip()


def _script_file(tmp_path, steps):
    path = tmp_path / "script.json"
    path.write_text(json.dumps(steps))
    return path


class TestIngest:
    def test_book_accepted(self, workspace, runner):
        tmp_path, data_dir = workspace
        assert (data_dir / "books/forest-walk/v000001.json").is_file()

    def test_framework_accepted(self, tmp_path, runner):
        doc = {
            "subject": "math",
            "levels": [{"ordinal": 1, "label": "L1"}],
            "concepts": [{"id": "m.x", "level": 1, "name": "x", "description": "d"}],
        }
        path = tmp_path / "framework.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["ingest", str(path), "--data-dir", str(tmp_path / "d")])
        assert result.exit_code == 0
        assert "ACCEPT framework math" in result.output

    def test_expressions_accepted(self, tmp_path, runner):
        entries = [
            {"id": "neutral", "label": "Neutral", "description": "d", "face_asset": "n.png"},
        ]
        path = tmp_path / "faces.json"
        path.write_text(json.dumps(entries))
        result = runner.invoke(main, ["ingest", str(path), "--data-dir", str(tmp_path / "d")])
        assert result.exit_code == 0
        assert "ACCEPT expressions faces" in result.output

    def test_rejection_exits_nonzero(self, tmp_path, runner):
        missing = tmp_path / "nope"
        result = runner.invoke(main, ["ingest", str(missing), "--data-dir", str(tmp_path / "d")])
        assert result.exit_code == 1
        assert "REJECT" in result.output

    def test_lenient_reports_but_exits_zero(self, tmp_path, runner):
        missing = tmp_path / "nope"
        result = runner.invoke(
            main, ["ingest", str(missing), "--lenient", "--data-dir", str(tmp_path / "d")]
        )
        assert result.exit_code == 0
        assert "REJECT" in result.output

    def test_mixed_batch_counts_only_rejects(self, workspace, tmp_path, runner):
        tmp_path_, data_dir = workspace
        other = write_bundle(tmp_path / "more", "second", "Second", FOREST_PAGES[:1])
        result = runner.invoke(
            main,
            ["ingest", str(other), str(tmp_path / "ghost"), "--lenient", "--data-dir", str(data_dir)],
        )
        assert result.exit_code == 0
        assert "ACCEPT book second" in result.output
        assert "REJECT" in result.output


class TestGenerate:
    def test_generate_prints_activity_id(self, workspace, runner):
        _, data_dir = workspace
        activity_id = _generate(runner, data_dir, launch=False)
        assert (data_dir / "activities" / activity_id).is_dir()

    def test_generate_unknown_book(self, workspace, runner):
        _, data_dir = workspace
        result = runner.invoke(
            main, ["generate", "--book", "ghost", "--subject", "math", "--data-dir", str(data_dir)]
        )
        assert result.exit_code == 1

    def test_launch_command(self, workspace, runner):
        _, data_dir = workspace
        activity_id = _generate(runner, data_dir, launch=False)
        result = runner.invoke(main, ["launch", "--activity", activity_id, "--data-dir", str(data_dir)])
        assert result.exit_code == 0
        assert (data_dir / "activities" / activity_id / "frozen").is_file()


class TestSimulateReplay:
    def test_simulate_writes_trace_and_robot_log(self, workspace, runner):
        tmp_path, data_dir = workspace
        activity_id = _generate(runner, data_dir)
        script = _script_file(
            tmp_path, [{"at_ms": i * 1000, "kind": "bumper_right"} for i in range(1, 21)]
        )
        trace = tmp_path / "trace.jsonl"
        result = runner.invoke(
            main,
            [
                "simulate", "--activity", activity_id, "--mode", "robot_takeover",
                "--script", str(script), "--out", str(trace), "--data-dir", str(data_dir),
            ],
        )
        assert result.exit_code == 0, result.output
        assert "completed" in result.output
        assert "20 speak calls" in result.output
        assert trace.is_file()
        assert trace.with_suffix(".robot.jsonl").is_file()

    def test_replay_match(self, workspace, runner):
        tmp_path, data_dir = workspace
        activity_id, trace = self._simulated(workspace, runner)
        result = runner.invoke(
            main, ["replay", "--log", str(trace), "--activity", activity_id, "--data-dir", str(data_dir)]
        )
        assert result.exit_code == 0, result.output
        assert result.output.strip().endswith("MATCH")

    def _simulated(self, workspace, runner):
        tmp_path, data_dir = workspace
        activity_id = _generate(runner, data_dir)
        script = _script_file(
            tmp_path, [{"at_ms": i * 1000, "kind": "bumper_right"} for i in range(1, 21)]
        )
        trace = tmp_path / "trace.jsonl"
        result = runner.invoke(
            main,
            [
                "simulate", "--activity", activity_id, "--mode", "robot_takeover",
                "--script", str(script), "--out", str(trace), "--data-dir", str(data_dir),
            ],
        )
        assert result.exit_code == 0, result.output
        return activity_id, trace

    def test_replay_mismatch_exit_3(self, workspace, runner):
        tmp_path, data_dir = workspace
        activity_id, trace = self._simulated(workspace, runner)
        lines = trace.read_text().splitlines()
        stamp = json.loads(lines[-1])
        stamp["final_state"]["page_index"] = 99
        lines[-1] = json.dumps(stamp, sort_keys=True)
        trace.write_text("\n".join(lines) + "\n")
        result = runner.invoke(
            main, ["replay", "--log", str(trace), "--activity", activity_id, "--data-dir", str(data_dir)]
        )
        assert result.exit_code == 3
        assert "MISMATCH" in result.output

    def test_replay_corrupt_log_exit_1(self, workspace, runner):
        tmp_path, data_dir = workspace
        activity_id, trace = self._simulated(workspace, runner)
        lines = trace.read_text().splitlines()
        trace.write_text("\n".join(lines[1:]) + "\n")  # drop the start event
        result = runner.invoke(
            main, ["replay", "--log", str(trace), "--activity", activity_id, "--data-dir", str(data_dir)]
        )
        assert result.exit_code == 1

    def test_bad_script_exit_1(self, workspace, runner):
        tmp_path, data_dir = workspace
        activity_id = _generate(runner, data_dir)
        script = _script_file(tmp_path, [{"at_ms": 100, "kind": "somersault"}])
        result = runner.invoke(
            main,
            [
                "simulate", "--activity", activity_id, "--mode", "robot_led",
                "--script", str(script), "--data-dir", str(data_dir),
            ],
        )
        assert result.exit_code == 1

    def test_missing_script_exit_1(self, workspace, runner):
        tmp_path, data_dir = workspace
        activity_id = _generate(runner, data_dir)
        result = runner.invoke(
            main,
            [
                "simulate", "--activity", activity_id, "--mode", "robot_led",
                "--script", str(tmp_path / "ghost.json"), "--data-dir", str(data_dir),
            ],
        )
        assert result.exit_code == 1


class TestRecommend:
    def test_full_table(self, runner):
        result = runner.invoke(main, ["recommend"])
        assert result.exit_code == 0
        assert len(result.output.strip().splitlines()) == 33

    def test_single_scenario(self, runner):
        scenario = json.dumps(
            {"skill": "low", "energy": "high", "time": "low", "trust_llm": "low", "content_reviewed": False}
        )
        result = runner.invoke(main, ["recommend", "--scenario", scenario])
        assert result.exit_code == 0
        assert result.output.startswith("avoid")
