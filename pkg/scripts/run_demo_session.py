"""End-to-end demo: build a book, generate an activity with the stub
provider, run a scripted robot-takeover session, and print the robot's
transcript plus the replay verdict.

    python3 scripts/run_demo_session.py
"""

import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "scripts"))

from make_demo_book import write_demo_bundle

from paired.activity import ActivityManager
from paired.framework import Subject, builtin_frameworks
from paired.library import Library
from paired.providers import StubProvider
from paired.session import Mode
from paired.simulate import load_script, run_simulation, verify_trace, write_trace


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        bundle = write_demo_bundle(Path(tmp) / "pond-day")
        library = Library()
        library.ingest_bundle(bundle)
        manager = ActivityManager(library, builtin_frameworks())
        activity = manager.create_activity("pond-day", Subject.MATH, "preschool", StubProvider())
        activity = manager.launch(activity.activity_id)
        book = library.get("pond-day")

        print(f"activity {activity.activity_id}: {len(activity.pages)} pages, launched")
        for page in activity.pages:
            print(f"  page {page.page_index}: [{page.concept_id}] {page.question}")

        # A child pressing the right bumper through the whole book.
        steps = [{"at_ms": i * 1500, "kind": "bumper_right"} for i in range(1, 4 * len(activity.pages) + 1)]
        result = run_simulation(
            activity,
            Mode.ROBOT_TAKEOVER,
            load_script(steps),
            book_texts={p.index: p.text for p in book.pages},
        )
        print(f"\nsession finished: {result.state.status.value}, {result.speak_count} robot utterances")
        for call in result.robot.calls:
            if call.op == "speak":
                print(f"  robot: {call.value}")

        trace = Path(tmp) / "trace.jsonl"
        write_trace(result, trace)
        match, _, _ = verify_trace(trace, activity)
        print(f"\nreplay check: {'MATCH' if match else 'MISMATCH'}")


if __name__ == "__main__":
    main()
