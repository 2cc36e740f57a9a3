"""Operator CLI: ingest content, generate activities headlessly, and
run or replay scripted sessions against the simulated robot.

Exit codes: 0 ok, 1 validation failure, 2 I/O failure, 3 replay mismatch.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from paired.errors import CorruptLog, PairedError, ScriptError
from paired.framework import Subject, load_framework
from paired.library import load_bundle
from paired.recommender import format_table, recommend_mode
from paired.robot import ExpressionDb
from paired.service import PairedService, ServiceConfig
from paired.session import Mode, SETScenario
from paired.simulate import load_script, run_simulation, verify_trace, write_trace

EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_MISMATCH = 3


def _service(data_dir: str) -> PairedService:
    return PairedService(ServiceConfig(data_dir=data_dir))


@click.group()
def main() -> None:
    """Desk-scale tooling for the reading-activity service."""


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path(exists=False))
@click.option("--data-dir", default="paired-data", show_default=True)
@click.option("--lenient", is_flag=True, help="Report rejections but exit 0.")
def ingest(paths: tuple[str, ...], data_dir: str, lenient: bool) -> None:
    """Ingest book bundles, framework documents, or expression databases."""
    svc = _service(data_dir)
    rejected = 0
    for raw in paths:
        path = Path(raw)
        try:
            kind, name = _ingest_one(svc, path)
            click.echo(f"ACCEPT {kind} {name} ({path})")
        except (PairedError, OSError, ValueError) as exc:
            rejected += 1
            click.echo(f"REJECT {path}: {exc}")
    if rejected and not lenient:
        sys.exit(EXIT_VALIDATION)


def _ingest_one(svc: PairedService, path: Path) -> tuple[str, str]:
    if path.is_dir():
        bundle = load_bundle(path)
        svc.library.add(bundle)
        svc.store.put("books", bundle.book_id, bundle.to_dict())
        return "book", bundle.book_id
    doc = json.loads(path.read_text())
    if isinstance(doc, list):
        ExpressionDb.from_file(path)
        svc.store.put("expression_dbs", path.stem, {"entries": doc})
        return "expressions", path.stem
    framework = load_framework(doc)
    svc.store.put("frameworks", framework.subject.value, doc)
    return "framework", framework.subject.value


@main.command()
@click.option("--book", "book_id", required=True)
@click.option("--subject", required=True, type=click.Choice([s.value for s in Subject]))
@click.option("--grade", default="preschool", show_default=True)
@click.option("--data-dir", default="paired-data", show_default=True)
@click.option("--launch", "do_launch", is_flag=True, help="Launch immediately after generation.")
def generate(book_id: str, subject: str, grade: str, data_dir: str, do_launch: bool) -> None:
    """Generate a full draft activity for a book (stub provider by default)."""
    svc = _service(data_dir)
    try:
        activity = svc.activities.create_activity(book_id, Subject(subject), grade, svc.provider)
        if do_launch:
            activity = svc.activities.launch(activity.activity_id)
            svc.store.freeze("activities", activity.activity_id)
    except PairedError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(activity.activity_id)


@main.command()
@click.option("--activity", "activity_id", required=True)
@click.option("--data-dir", default="paired-data", show_default=True)
def launch(activity_id: str, data_dir: str) -> None:
    """Freeze a draft activity so sessions can reference it."""
    svc = _service(data_dir)
    try:
        svc.activities.launch(activity_id)
        svc.store.freeze("activities", activity_id)
    except PairedError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(f"launched {activity_id}")


@main.command()
@click.option("--activity", "activity_id", required=True)
@click.option("--mode", required=True, type=click.Choice([m.value for m in Mode]))
@click.option("--script", "script_path", required=True, type=click.Path())
@click.option("--robot", default="sim", type=click.Choice(["sim"]), show_default=True)
@click.option("--out", "out_path", default="trace.jsonl", show_default=True)
@click.option("--data-dir", default="paired-data", show_default=True)
def simulate(activity_id: str, mode: str, script_path: str, robot: str, out_path: str, data_dir: str) -> None:
    """Run a scripted session; writes the event trace and robot call log."""
    svc = _service(data_dir)
    try:
        script = load_script(script_path)
    except ScriptError as exc:
        click.echo(f"script error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        activity = svc.activities.get(activity_id)
        book = svc.library.get(activity.book_id)
        result = run_simulation(
            activity,
            Mode(mode),
            script,
            book_texts={p.index: p.text for p in book.pages},
            expression_db=svc.expression_db,
        )
    except PairedError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        robot_log = write_trace(result, out_path)
    except OSError as exc:
        click.echo(f"cannot write trace: {exc}", err=True)
        sys.exit(EXIT_IO)
    click.echo(
        f"session {result.state.status.value}; {result.speak_count} speak calls; "
        f"trace -> {out_path}, robot log -> {robot_log}"
    )


@main.command()
@click.option("--log", "log_path", required=True, type=click.Path())
@click.option("--activity", "activity_id", required=True)
@click.option("--data-dir", default="paired-data", show_default=True)
def replay(log_path: str, activity_id: str, data_dir: str) -> None:
    """Replay a trace and verify it against its final-state stamp."""
    svc = _service(data_dir)
    try:
        activity = svc.activities.get(activity_id)
        match, replayed, stamped = verify_trace(log_path, activity)
    except CorruptLog as exc:
        click.echo(f"CORRUPT: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except OSError as exc:
        click.echo(f"cannot read trace: {exc}", err=True)
        sys.exit(EXIT_IO)
    except PairedError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(json.dumps(replayed, sort_keys=True))
    if match:
        click.echo("MATCH")
    else:
        click.echo(f"MISMATCH: stamped {json.dumps(stamped, sort_keys=True)}")
        sys.exit(EXIT_MISMATCH)


@main.command()
@click.option("--scenario", "scenario_json", default=None, help="JSON scenario; omit to print the full table.")
def recommend(scenario_json: str | None) -> None:
    """Print mode recommendations for a scenario, or the whole rule table."""
    if scenario_json is None:
        click.echo(format_table())
        return
    scenario = SETScenario.from_dict(json.loads(scenario_json))
    for rec in recommend_mode(scenario):
        click.echo(f"{rec.choice}\t{rec.tag}")


@main.command()
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--data-dir", default="paired-data", show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(config_path: str | None, data_dir: str, host: str, port: int) -> None:
    """Run the HTTP service."""
    from paired.service import serve as run_server

    config = ServiceConfig.from_file(config_path) if config_path else ServiceConfig(data_dir=data_dir)
    run_server(config, host=host, port=port)


if __name__ == "__main__":
    main()
