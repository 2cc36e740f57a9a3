"""Live reading sessions: four-mode state machine, per-component role
delegation, cursor advancement, and deterministic event-log replay.

Every mutation goes through ``_apply`` so a replayed log and a live
session traverse identical code, which is what makes replay equality a
structural guarantee rather than a test hope.
"""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field
from enum import Enum

from paired.activity import Activity, ActivityStatus
from paired.contentgen import COMPONENT_ORDER, ComponentKind
from paired.errors import (
    ActivityNotLaunched,
    CorruptLog,
    DelegationLockedInTakeover,
    PairedError,
    SessionCompleted,
)


class Mode(str, Enum):
    PARENT_TAKEOVER = "parent_takeover"
    PARENT_LED = "parent_led"
    ROBOT_LED = "robot_led"
    ROBOT_TAKEOVER = "robot_takeover"


class Actor(str, Enum):
    PARENT = "parent"
    ROBOT = "robot"


TAKEOVER_MODES = {Mode.PARENT_TAKEOVER, Mode.ROBOT_TAKEOVER}
LED_MODES = {Mode.PARENT_LED, Mode.ROBOT_LED}

Delegation = dict[ComponentKind, Actor]


def default_delegation(mode: Mode) -> Delegation:
    """Mode presets: parent modes start all-parent, robot modes all-robot."""
    actor = Actor.PARENT if mode in (Mode.PARENT_TAKEOVER, Mode.PARENT_LED) else Actor.ROBOT
    return {kind: actor for kind in COMPONENT_ORDER}


class Level(str, Enum):
    HIGH = "high"
    LOW = "low"


@dataclass(frozen=True)
class SETScenario:
    """One involvement scenario: skill/energy/time plus the two
    recommender extensions (LLM trust and whether content was reviewed)."""

    skill: Level
    energy: Level
    time: Level
    trust_llm: Level = Level.HIGH
    content_reviewed: bool = False

    def to_dict(self) -> dict:
        return {
            "skill": self.skill.value,
            "energy": self.energy.value,
            "time": self.time.value,
            "trust_llm": self.trust_llm.value,
            "content_reviewed": self.content_reviewed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "SETScenario":
        return cls(
            skill=Level(doc["skill"]),
            energy=Level(doc["energy"]),
            time=Level(doc["time"]),
            trust_llm=Level(doc.get("trust_llm", "high")),
            content_reviewed=bool(doc.get("content_reviewed", False)),
        )


class EventKind(str, Enum):
    START = "start"
    NEXT = "next"
    REPEAT = "repeat"
    SET_MODE = "set_mode"
    SET_DELEGATION = "set_delegation"
    SCENARIO_TAG = "scenario_tag"
    END = "end"


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    kind: EventKind
    args: dict
    timestamp: float

    def to_dict(self) -> dict:
        return {"seq": self.seq, "kind": self.kind.value, "args": self.args, "timestamp": self.timestamp}

    @classmethod
    def from_dict(cls, doc: dict) -> "SessionEvent":
        return cls(
            seq=int(doc["seq"]),
            kind=EventKind(doc["kind"]),
            args=dict(doc.get("args", {})),
            timestamp=float(doc.get("timestamp", 0.0)),
        )


class SessionStatus(str, Enum):
    RUNNING = "running"
    COMPLETED = "completed"


@dataclass(frozen=True)
class Directive:
    actor: Actor
    component: ComponentKind
    payload: dict
    page_index: int

    def to_dict(self) -> dict:
        return {
            "actor": self.actor.value,
            "component": self.component.value,
            "payload": self.payload,
            "page_index": self.page_index,
        }


@dataclass
class SessionState:
    session_id: str
    activity: Activity
    mode: Mode
    delegation: Delegation
    page_index: int = 1
    component_index: int = 0
    status: SessionStatus = SessionStatus.RUNNING
    event_log: list[SessionEvent] = field(default_factory=list)
    scenario: SETScenario | None = None
    # Source prose per page; the activity snapshot holds only generated
    # components, but the BookText directive needs the book's own text.
    book_texts: dict[int, str] = field(default_factory=dict)

    @property
    def page_count(self) -> int:
        return len(self.activity.pages)

    def core_state(self) -> dict:
        """The replay-compared projection: mode, delegation, cursor, status."""
        return {
            "mode": self.mode.value,
            "delegation": {k.value: v.value for k, v in self.delegation.items()},
            "page_index": self.page_index,
            "component_index": self.component_index,
            "status": self.status.value,
        }

    def to_dict(self) -> dict:
        doc = {
            "session_id": self.session_id,
            "activity_id": self.activity.activity_id,
            **self.core_state(),
        }
        if self.scenario is not None:
            doc["scenario"] = self.scenario.to_dict()
        return doc


def current_directive(state: SessionState) -> Directive | None:
    """The directive for the current cursor, or None once completed.

    The actor is re-evaluated against the live delegation on every call,
    so a repeat after a delegation change speaks with the new actor.
    """
    if state.status is SessionStatus.COMPLETED:
        return None
    component = COMPONENT_ORDER[state.component_index]
    content = state.activity.page(state.page_index)
    payload: dict
    if component is ComponentKind.QUESTION:
        payload = {"text": content.question, "choices": list(content.choices)}
    elif component is ComponentKind.BOOK_TEXT:
        payload = {"text": state.book_texts.get(state.page_index, "")}
    else:
        payload = {"text": content.component_text(component)}
    return Directive(
        actor=state.delegation[component],
        component=component,
        payload=payload,
        page_index=state.page_index,
    )


# -- event application -------------------------------------------------------


def _apply(state: SessionState, kind: EventKind, args: dict) -> None:
    """Mutate the state for one event, raising if the event is illegal."""
    if kind is EventKind.START:
        raise PairedError("start is only legal as the first event")
    if state.status is SessionStatus.COMPLETED and kind is not EventKind.END:
        raise SessionCompleted(f"session {state.session_id} already completed")

    if kind is EventKind.SET_MODE:
        mode = Mode(args["mode"])
        state.mode = mode
        state.delegation = default_delegation(mode)
    elif kind is EventKind.SET_DELEGATION:
        if state.mode in TAKEOVER_MODES:
            raise DelegationLockedInTakeover(f"delegation is locked in {state.mode.value}")
        component = ComponentKind(args["component"])
        state.delegation[component] = Actor(args["actor"])
    elif kind is EventKind.NEXT:
        if state.component_index + 1 < len(COMPONENT_ORDER):
            state.component_index += 1
        elif state.page_index < state.page_count:
            state.page_index += 1
            state.component_index = 0
        else:
            state.status = SessionStatus.COMPLETED
    elif kind is EventKind.REPEAT:
        pass  # cursor unchanged; the caller re-emits the current directive
    elif kind is EventKind.SCENARIO_TAG:
        state.scenario = SETScenario.from_dict(args)
    elif kind is EventKind.END:
        if state.status is not SessionStatus.COMPLETED:
            raise PairedError("end event before the final component")


def _record(state: SessionState, kind: EventKind, args: dict, timestamp: float | None) -> SessionEvent:
    _apply(state, kind, args)
    event = SessionEvent(
        seq=len(state.event_log) + 1,
        kind=kind,
        args=args,
        timestamp=time.time() if timestamp is None else timestamp,
    )
    state.event_log.append(event)
    return event


# -- operations --------------------------------------------------------------


def start_session(
    activity: Activity,
    initial_mode: Mode,
    session_id: str | None = None,
    timestamp: float | None = None,
    book_texts: dict[int, str] | None = None,
) -> tuple[SessionState, Directive]:
    """Open a session on a launched activity at (page 1, book text)."""
    if activity.status is not ActivityStatus.LAUNCHED:
        raise ActivityNotLaunched(f"activity {activity.activity_id} is not launched")
    state = SessionState(
        session_id=session_id or uuid.uuid4().hex[:12],
        activity=activity,
        mode=initial_mode,
        delegation=default_delegation(initial_mode),
        book_texts=dict(book_texts or {}),
    )
    event = SessionEvent(
        seq=1,
        kind=EventKind.START,
        args={"mode": initial_mode.value},
        timestamp=time.time() if timestamp is None else timestamp,
    )
    state.event_log.append(event)
    directive = current_directive(state)
    assert directive is not None
    return state, directive


def set_mode(state: SessionState, mode: Mode, timestamp: float | None = None) -> SessionState:
    """Switch mode; delegation resets to the new mode's defaults.

    The in-flight component is not interrupted: the new delegation takes
    effect from the next directive emission.
    """
    _record(state, EventKind.SET_MODE, {"mode": mode.value}, timestamp)
    return state


def set_delegation(
    state: SessionState, component: ComponentKind, actor: Actor, timestamp: float | None = None
) -> SessionState:
    _record(state, EventKind.SET_DELEGATION, {"component": component.value, "actor": actor.value}, timestamp)
    return state


def tag_scenario(state: SessionState, scenario: SETScenario, timestamp: float | None = None) -> SessionState:
    _record(state, EventKind.SCENARIO_TAG, scenario.to_dict(), timestamp)
    return state


def advance(state: SessionState, timestamp: float | None = None) -> tuple[SessionState, Directive | None]:
    """Move the cursor to the next component, or complete the session."""
    _record(state, EventKind.NEXT, {}, timestamp)
    if state.status is SessionStatus.COMPLETED:
        _record(state, EventKind.END, {}, timestamp)
        return state, None
    return state, current_directive(state)


def repeat(state: SessionState, timestamp: float | None = None) -> Directive:
    """Re-emit the current directive without moving the cursor."""
    _record(state, EventKind.REPEAT, {}, timestamp)
    directive = current_directive(state)
    assert directive is not None
    return directive


def replay(
    event_log: list[SessionEvent],
    activity: Activity,
    session_id: str = "replay",
    book_texts: dict[int, str] | None = None,
) -> SessionState:
    """Rebuild a session state by reapplying an event log in seq order.

    Raises CorruptLog on a seq gap, a missing Start, or any event that is
    illegal in the state reconstructed so far.
    """
    if not event_log:
        raise CorruptLog("empty log: missing start event")
    if event_log[0].kind is not EventKind.START:
        raise CorruptLog(f"first event is {event_log[0].kind.value}, expected start")
    if activity.status is not ActivityStatus.LAUNCHED:
        raise CorruptLog(f"activity {activity.activity_id} is not launched")

    state = None
    for i, event in enumerate(event_log):
        if event.seq != i + 1:
            raise CorruptLog(f"seq gap: event {i} has seq {event.seq}, expected {i + 1}")
        if i == 0:
            try:
                mode = Mode(event.args["mode"])
            except (KeyError, ValueError) as exc:
                raise CorruptLog(f"bad start event args: {event.args}") from exc
            state = SessionState(
                session_id=session_id,
                activity=activity,
                mode=mode,
                delegation=default_delegation(mode),
                book_texts=dict(book_texts or {}),
            )
            state.event_log.append(event)
            continue
        try:
            _apply(state, event.kind, event.args)
        except PairedError as exc:
            raise CorruptLog(f"event seq {event.seq} ({event.kind.value}) illegal: {exc}") from exc
        state.event_log.append(event)
    return state
