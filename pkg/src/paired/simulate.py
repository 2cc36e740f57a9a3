"""Scripted desk-scale sessions against the simulated robot.

A script is a JSON list of timed events ``{at_ms, kind, args}`` with
non-decreasing ``at_ms``. Traces are deterministic: event timestamps are
the script times, and the robot call log uses the simulated robot's own
latency clock. The trace file holds one session event per line followed
by a final-state stamp that ``verify_trace`` checks via replay.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from paired.activity import Activity
from paired.errors import CorruptLog, ScriptError, SessionCompleted
from paired.orchestrator import SessionRunner
from paired.robot import ExpressionDb, SimulatedRobot
from paired.session import Mode, SessionEvent, replay, start_session

_VALID_KINDS = {"bumper_left", "bumper_right", "next", "repeat", "set_mode", "set_delegation", "scenario_tag"}


@dataclass(frozen=True)
class ScriptStep:
    at_ms: int
    kind: str
    args: dict


def load_script(source: str | Path | list) -> list[ScriptStep]:
    if isinstance(source, (str, Path)):
        try:
            entries = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ScriptError(f"cannot read script: {exc}") from exc
    else:
        entries = source
    steps = []
    last = 0
    for entry in entries:
        try:
            step = ScriptStep(at_ms=int(entry["at_ms"]), kind=str(entry["kind"]), args=dict(entry.get("args", {})))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScriptError(f"bad script entry {entry!r}: {exc}") from exc
        if step.kind not in _VALID_KINDS:
            raise ScriptError(f"unknown script event kind {step.kind!r}")
        if step.at_ms < last:
            raise ScriptError(f"at_ms must be non-decreasing, got {step.at_ms} after {last}")
        last = step.at_ms
        steps.append(step)
    return steps


@dataclass
class SimulationResult:
    state: object
    robot: SimulatedRobot

    @property
    def speak_count(self) -> int:
        return len(self.robot.speak_texts())


def run_simulation(
    activity: Activity,
    mode: Mode,
    script: list[ScriptStep],
    book_texts: dict[int, str] | None = None,
    expression_db: ExpressionDb | None = None,
) -> SimulationResult:
    """Drive one full session from a script against the simulated robot.

    Events arriving after completion are ignored, matching a child who
    keeps pressing the bumper after the activity has ended.
    """
    robot = SimulatedRobot()
    state, _ = start_session(activity, mode, session_id="sim", timestamp=0.0, book_texts=book_texts)
    runner = SessionRunner(state, adapter=robot, expression_db=expression_db)
    runner.emit_initial()
    for step in script:
        try:
            runner.handle(step.kind, step.args, timestamp=float(step.at_ms))
        except SessionCompleted:
            break
    return SimulationResult(state=state, robot=robot)


def write_trace(result: SimulationResult, trace_path: str | Path) -> Path:
    """Write the session event log plus a final-state stamp; the robot
    call log goes to a ``.robot.jsonl`` side file."""
    trace_path = Path(trace_path)
    lines = [json.dumps(e.to_dict(), sort_keys=True) for e in result.state.event_log]
    lines.append(json.dumps({"final_state": result.state.core_state()}, sort_keys=True))
    trace_path.write_text("\n".join(lines) + "\n")

    robot_path = trace_path.with_suffix(".robot.jsonl")
    robot_lines = [json.dumps(c.to_dict(), sort_keys=True) for c in result.robot.calls]
    robot_path.write_text("\n".join(robot_lines) + ("\n" if robot_lines else ""))
    return robot_path


def read_trace(trace_path: str | Path) -> tuple[list[SessionEvent], dict]:
    lines = [ln for ln in Path(trace_path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise CorruptLog("trace is empty: missing start event")
    stamp = json.loads(lines[-1])
    if "final_state" not in stamp:
        raise CorruptLog("trace is missing the final-state stamp")
    events = [SessionEvent.from_dict(json.loads(ln)) for ln in lines[:-1]]
    return events, stamp["final_state"]


def verify_trace(trace_path: str | Path, activity: Activity) -> tuple[bool, dict, dict]:
    """Replay a trace and compare against its embedded final-state stamp.

    Returns (match, replayed_state, stamped_state).
    """
    events, stamped = read_trace(trace_path)
    state = replay(events, activity)
    replayed = state.core_state()
    return replayed == stamped, replayed, stamped
