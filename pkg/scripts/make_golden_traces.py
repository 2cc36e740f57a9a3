"""Regenerate the golden session traces under tests/golden/.

The traces cover a one-page activity driven entirely by bumper presses:
a robot-takeover walk to completion, the same walk under parent
takeover, and a repeat press in robot takeover. Run from the repo root:

    python3 scripts/make_golden_traces.py
"""

import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from paired.activity import ActivityManager
from paired.framework import Subject, builtin_frameworks
from paired.library import Library
from paired.providers import StubProvider
from paired.session import Mode
from paired.simulate import load_script, run_simulation, write_trace
from tests.conftest import one_page_bundle

SCENARIOS = {
    "robot_takeover_right4": (
        Mode.ROBOT_TAKEOVER,
        [{"at_ms": i * 1000, "kind": "bumper_right"} for i in range(1, 5)],
    ),
    "parent_takeover_right4": (
        Mode.PARENT_TAKEOVER,
        [{"at_ms": i * 1000, "kind": "bumper_right"} for i in range(1, 5)],
    ),
    "robot_takeover_left_repeat": (
        Mode.ROBOT_TAKEOVER,
        [{"at_ms": 1000, "kind": "bumper_right"}, {"at_ms": 2000, "kind": "bumper_left"}],
    ),
}


def build_activity():
    with tempfile.TemporaryDirectory() as tmp:
        bundle = one_page_bundle(Path(tmp))
        library = Library()
        library.ingest_bundle(bundle)
        manager = ActivityManager(library, builtin_frameworks())
        activity = manager.create_activity("single-page", Subject.MATH, "preschool", StubProvider())
        activity = manager.launch(activity.activity_id)
        book = library.get("single-page")
        return activity, {p.index: p.text for p in book.pages}


def main() -> None:
    golden = ROOT / "tests" / "golden"
    golden.mkdir(parents=True, exist_ok=True)
    activity, book_texts = build_activity()
    for name, (mode, steps) in SCENARIOS.items():
        result = run_simulation(activity, mode, load_script(steps), book_texts=book_texts)
        trace_path = golden / f"{name}.jsonl"
        robot_path = write_trace(result, trace_path)
        print(f"{name}: {result.state.status.value}, {result.speak_count} speak calls")
        print(f"  {trace_path}")
        print(f"  {robot_path}")


if __name__ == "__main__":
    main()
