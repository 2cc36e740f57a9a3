"""HTTP/JSON API binding every module, with file-backed persistence and
a server-sent-events channel streaming session state to clients.

The service keeps one SessionRunner per live session; every committed
event is appended to the session's on-disk log before the push frame
goes out, so a restart can always rebuild state via replay.
"""

from __future__ import annotations

import json
import logging
import queue
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse

from paired.activity import Activity, ActivityManager
from paired.contentgen import ComponentKind
from paired.errors import (
    ActivityLaunched,
    ActivityNotLaunched,
    AdapterUnreachable,
    ConfigError,
    ContentInvalid,
    DelegationLockedInTakeover,
    ImmutableViolation,
    NotFound,
    PairedError,
    ParseError,
    ProviderUnavailable,
    SessionCompleted,
    UnknownActivity,
    UnknownBook,
    UnknownPage,
    UnknownSession,
    ValidationError,
)
from paired.framework import Subject, builtin_frameworks, list_concepts
from paired.library import BookBundle, Library
from paired.orchestrator import SessionRunner
from paired.providers import provider_from_env
from paired.recommender import recommend_mode
from paired.robot import ExpressionDb, HttpRobot, SimulatedRobot
from paired.session import Mode, SETScenario, current_directive, replay, start_session
from paired.store import DocumentStore
from paired.tts import HttpTts, NullTts

logger = logging.getLogger(__name__)

_STATUS_BY_ERROR = [
    ((NotFound, UnknownBook, UnknownPage, UnknownActivity, UnknownSession), 404),
    ((ActivityLaunched, ImmutableViolation, SessionCompleted, DelegationLockedInTakeover, ActivityNotLaunched), 409),
    ((ContentInvalid, ValidationError, ParseError), 422),
    ((ProviderUnavailable, AdapterUnreachable), 503),
]


def _http_status(exc: PairedError) -> int:
    for types, status in _STATUS_BY_ERROR:
        if isinstance(exc, types):
            return status
    return 400


@dataclass
class ServiceConfig:
    data_dir: str = "paired-data"
    robot_kind: str = "sim"  # sim | http
    robot_url: str | None = None
    tts_kind: str = "null"  # null | http
    tts_url: str | None = None
    env: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.robot_kind not in ("sim", "http"):
            raise ConfigError(f"robot.kind must be sim or http, got {self.robot_kind!r}")
        if self.robot_kind == "http" and not self.robot_url:
            raise ConfigError("robot.kind=http requires robot.url")
        if self.tts_kind not in ("null", "http"):
            raise ConfigError(f"tts.kind must be null or http, got {self.tts_kind!r}")

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls(
            data_dir=doc.get("data_dir", "paired-data"),
            robot_kind=doc.get("robot", {}).get("kind", "sim"),
            robot_url=doc.get("robot", {}).get("url"),
            tts_kind=doc.get("tts", {}).get("kind", "null"),
            tts_url=doc.get("tts", {}).get("url"),
        )


class PairedService:
    """All service state; the FastAPI app is a thin routing layer on top."""

    def __init__(self, config: ServiceConfig) -> None:
        self.config = config
        self.store = DocumentStore(config.data_dir)
        self.library = Library()
        self.frameworks = builtin_frameworks()
        self.provider = provider_from_env(config.env or None)
        self.expression_db = ExpressionDb.builtin()
        self.activities = ActivityManager(self.library, self.frameworks, on_change=self._persist_activity)
        self.runners: dict[str, SessionRunner] = {}
        self._subscribers: dict[str, list[queue.Queue]] = {}
        self._last_frames: dict[str, dict] = {}
        self._lock = threading.Lock()
        self._restore()

    # -- persistence ---------------------------------------------------------

    def _persist_activity(self, activity: Activity) -> None:
        self.store.put("activities", activity.activity_id, activity.to_dict())

    def _restore(self) -> None:
        for book_id in self.store.list_ids("books"):
            body, _ = self.store.get("books", book_id)
            self.library.add(BookBundle.from_dict(body))
        for activity_id in self.store.list_ids("activities"):
            body, _ = self.store.get("activities", activity_id)
            self.activities.restore(Activity.from_dict(body))
        for session_id in self.store.list_ids("sessions"):
            events = self.store.read_events(session_id)
            if not events:
                continue
            try:
                meta, _ = self.store.get("sessions", session_id)
                activity = self.activities.get(meta["activity_id"])
                from paired.session import SessionEvent

                state = replay(
                    [SessionEvent.from_dict(e) for e in events],
                    activity,
                    session_id=session_id,
                    book_texts=self._book_texts(activity),
                )
            except PairedError as exc:
                logger.warning("could not resume session %s: %s", session_id, exc)
                continue
            self.runners[session_id] = self._make_runner(state)

    def _book_texts(self, activity: Activity) -> dict[int, str]:
        book = self.library.get(activity.book_id)
        return {p.index: p.text for p in book.pages}

    # -- session plumbing ----------------------------------------------------

    def _make_adapter(self):
        if self.config.robot_kind == "http":
            return HttpRobot(self.config.robot_url)
        return SimulatedRobot()

    def _make_tts(self):
        if self.config.tts_kind == "http" and self.config.tts_url:
            return HttpTts(self.config.tts_url, cache_dir=Path(self.config.data_dir) / "tts-cache")
        return NullTts()

    def _make_runner(self, state) -> SessionRunner:
        return SessionRunner(
            state,
            adapter=self._make_adapter(),
            expression_db=self.expression_db,
            tts=self._make_tts(),
            on_commit=self._on_session_commit,
        )

    def frame_for(self, session_id: str) -> dict:
        runner = self.get_runner(session_id)
        state = runner.state
        directive = current_directive(state)
        return {
            "session_id": session_id,
            "seq": state.event_log[-1].seq if state.event_log else 0,
            "state": {
                **state.core_state(),
                "current_directive": directive.to_dict() if directive else None,
            },
        }

    def _on_session_commit(self, state, new_events, directive) -> None:
        for event in new_events:
            self.store.append_event(state.session_id, event.to_dict())
        self.store.put("sessions", state.session_id, {
            "activity_id": state.activity.activity_id,
            "status": state.status.value,
        })
        frame = self.frame_for(state.session_id)
        self._last_frames[state.session_id] = frame
        for q in list(self._subscribers.get(state.session_id, [])):
            q.put(frame)

    def get_runner(self, session_id: str) -> SessionRunner:
        try:
            return self.runners[session_id]
        except KeyError:
            raise UnknownSession(f"no session {session_id!r}") from None

    def create_session(self, activity_id: str, mode: Mode) -> dict:
        activity = self.activities.get(activity_id)
        state, _ = start_session(activity, mode, book_texts=self._book_texts(activity))
        runner = self._make_runner(state)
        with self._lock:
            self.runners[state.session_id] = runner
            self._subscribers.setdefault(state.session_id, [])
        runner.emit_initial()
        return self.frame_for(state.session_id)

    def subscribe(self, session_id: str) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.setdefault(session_id, []).append(q)
        return q

    def unsubscribe(self, session_id: str, q: queue.Queue) -> None:
        with self._lock:
            subs = self._subscribers.get(session_id, [])
            if q in subs:
                subs.remove(q)


def create_app(service: PairedService) -> FastAPI:
    app = FastAPI(title="paired", version="0.1.0")
    svc = service

    @app.exception_handler(PairedError)
    async def domain_error(request: Request, exc: PairedError):
        body = {"error": type(exc).__name__, "detail": str(exc)}
        report = getattr(exc, "report", None)
        if report is not None:
            body["report"] = report.to_dict()
        return JSONResponse(status_code=_http_status(exc), content=body)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/books")
    def list_books():
        return [b.to_dict() for b in svc.library.list_books()]

    @app.post("/books")
    def add_book(body: dict):
        if "path" in body:
            bundle = svc.library.ingest_bundle(body["path"])
        else:
            bundle = BookBundle.from_dict(body)
            svc.library.add(bundle)
        svc.store.put("books", bundle.book_id, bundle.to_dict())
        return bundle.to_dict()

    @app.get("/frameworks")
    def frameworks():
        return {
            subject.value: {
                "levels": [{"ordinal": lv.ordinal, "label": lv.label} for lv in fw.levels],
                "concepts": [
                    {"id": c.id, "level": c.level, "name": c.name, "description": c.description}
                    for c in list_concepts(fw)
                ],
            }
            for subject, fw in svc.frameworks.items()
        }

    @app.post("/activities")
    def create_activity(body: dict):
        activity = svc.activities.create_activity(
            body["book_id"], Subject.parse(body["subject"]), body.get("grade", "preschool"), svc.provider
        )
        return activity.to_dict()

    @app.get("/activities")
    def list_activities():
        return [a.to_dict() for a in svc.activities.list_activities()]

    @app.get("/activities/{activity_id}")
    def get_activity(activity_id: str):
        return svc.activities.get(activity_id).to_dict()

    @app.post("/activities/{activity_id}/pages/{page_index}/edit")
    def edit_page(activity_id: str, page_index: int, body: dict):
        component = ComponentKind(body["component"])
        activity = svc.activities.edit_component(activity_id, page_index, component, body["value"])
        return activity.to_dict()

    @app.post("/activities/{activity_id}/pages/{page_index}/regenerate")
    def regenerate_page(activity_id: str, page_index: int, body: dict):
        activity = svc.activities.regenerate_page(activity_id, page_index, body.get("scope", "all"), svc.provider)
        return activity.to_dict()

    @app.post("/activities/{activity_id}/pages/{page_index}/concept")
    def change_concept(activity_id: str, page_index: int, body: dict):
        activity = svc.activities.change_concept(activity_id, page_index, body["concept_id"], svc.provider)
        return activity.to_dict()

    @app.get("/activities/{activity_id}/summary")
    def summary(activity_id: str):
        return svc.activities.review_summary(activity_id).to_dict()

    @app.post("/activities/{activity_id}/launch")
    def launch(activity_id: str):
        activity = svc.activities.launch(activity_id)
        svc.store.freeze("activities", activity_id)
        return activity.to_dict()

    @app.post("/activities/{activity_id}/clone")
    def clone(activity_id: str):
        return svc.activities.clone_reviewed(activity_id).to_dict()

    @app.post("/sessions")
    def create_session(body: dict):
        return svc.create_session(body["activity_id"], Mode(body["mode"]))

    @app.post("/sessions/{session_id}/events")
    def session_event(session_id: str, body: dict):
        runner = svc.get_runner(session_id)
        runner.handle(body["kind"], body.get("args", {}))
        return svc.frame_for(session_id)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return svc.frame_for(session_id)

    @app.get("/sessions/{session_id}/stream")
    def stream(session_id: str):
        runner = svc.get_runner(session_id)

        def frames():
            # Late subscribers start from the current state, no history.
            first = svc.frame_for(session_id)
            q = svc.subscribe(session_id)
            try:
                yield f"data: {json.dumps(first, sort_keys=True)}\n\n"
                if first["state"]["status"] == "completed":
                    return
                while True:
                    try:
                        frame = q.get(timeout=0.25)
                    except queue.Empty:
                        continue
                    yield f"data: {json.dumps(frame, sort_keys=True)}\n\n"
                    if frame["state"]["status"] == "completed":
                        return
            finally:
                svc.unsubscribe(session_id, q)

        return StreamingResponse(frames(), media_type="text/event-stream")

    @app.post("/recommend")
    def recommend(body: dict):
        scenario = SETScenario.from_dict(body.get("scenario", body))
        return {"recommendations": [r.to_dict() for r in recommend_mode(scenario)]}

    return app


def serve(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8000):
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    app = create_app(PairedService(config))
    uvicorn.run(app, host=host, port=port)
