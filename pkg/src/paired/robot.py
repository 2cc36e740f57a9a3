"""Robot adapter boundary: directive dispatch, expression selection,
bumper-event mapping, a desk-scale simulated robot, and an HTTP client.

Commands for one robot run in submission order; the simulated robot
records every call so tests can assert the robot-silence invariant
(speak calls == robot-delegated directives).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Protocol

from paired.contentgen import ComponentKind
from paired.errors import AdapterUnreachable
from paired.session import Actor, Directive, EventKind
from paired.tts import AudioRef, TtsProvider, synthesize

logger = logging.getLogger(__name__)


class RobotEvent(str, Enum):
    BUMPER_LEFT = "bumper_left"
    BUMPER_RIGHT = "bumper_right"


def map_robot_event(event: RobotEvent) -> EventKind:
    """Bumper inputs: left repeats the component, right proceeds."""
    return EventKind.REPEAT if event is RobotEvent.BUMPER_LEFT else EventKind.NEXT


@dataclass(frozen=True)
class ExpressionEntry:
    id: str
    label: str
    description: str
    face_asset: str
    motion: str | None = None


NEUTRAL_ID = "neutral"


class ExpressionDb:
    """Expression database with a guaranteed neutral fallback entry."""

    def __init__(self, entries: list[ExpressionEntry]) -> None:
        if not entries:
            raise ValueError("expression database must not be empty")
        self._by_id = {e.id: e for e in entries}
        if len(self._by_id) != len(entries):
            raise ValueError("expression ids must be unique")
        if NEUTRAL_ID not in self._by_id:
            raise ValueError("expression database needs a neutral fallback")

    @classmethod
    def from_file(cls, path: str | Path) -> "ExpressionDb":
        return cls([ExpressionEntry(**e) for e in json.loads(Path(path).read_text())])

    @classmethod
    def builtin(cls) -> "ExpressionDb":
        text = resources.files("paired").joinpath("data/expressions.json").read_text()
        return cls([ExpressionEntry(**e) for e in json.loads(text)])

    def get(self, expression_id: str) -> ExpressionEntry | None:
        return self._by_id.get(expression_id)

    @property
    def neutral(self) -> ExpressionEntry:
        return self._by_id[NEUTRAL_ID]

    def ids(self) -> list[str]:
        return list(self._by_id)


# Heuristic selection: celebratory keywords win, then the per-component
# default, then neutral.
_KEYWORDS = {
    "great job": "celebratory",
    "well done": "celebratory",
    "fun fact": "celebratory",
    "hooray": "celebratory",
    "wonderful": "celebratory",
}
_COMPONENT_DEFAULTS = {
    ComponentKind.BOOK_TEXT: "happy",
    ComponentKind.QUESTION: "curious",
    ComponentKind.EXPLANATION: "thinking",
    ComponentKind.MOTIVATION: "celebratory",
}


def select_expression(
    component: ComponentKind,
    content_text: str,
    db: ExpressionDb,
    selector=None,
) -> ExpressionEntry:
    """Pick an expression for a component; total, falls back to neutral.

    ``selector`` may be a callable (component, text, ids) -> id, e.g. an
    LLM-backed chooser; ids outside the database fall back to neutral.
    """
    if selector is not None:
        chosen = selector(component, content_text, db.ids())
        return db.get(str(chosen)) or db.neutral
    if not content_text.strip():
        return db.neutral
    lowered = content_text.lower()
    for keyword, expression_id in _KEYWORDS.items():
        if keyword in lowered:
            return db.get(expression_id) or db.neutral
    return db.get(_COMPONENT_DEFAULTS[component]) or db.neutral


class RobotAdapter(Protocol):
    def speak(self, audio: AudioRef) -> None: ...
    def show_expression(self, expression_id: str) -> None: ...
    def set_status(self, text: str) -> None: ...


@dataclass(frozen=True)
class RobotCall:
    op: str  # speak | show_expression | set_status
    value: str
    timestamp: float

    def to_dict(self) -> dict:
        return {"op": self.op, "value": self.value, "timestamp": self.timestamp}


class SimulatedRobot:
    """Desk-scale stand-in for hardware: records every call in order.

    ``unreachable`` makes every command raise AdapterUnreachable;
    ``speak_latency`` is carried in the log timestamps so pacing tests
    do not need to sleep.
    """

    def __init__(self, unreachable: bool = False, speak_latency: float = 0.0) -> None:
        self.unreachable = unreachable
        self.speak_latency = speak_latency
        self.calls: list[RobotCall] = []
        self._clock = 0.0

    def _record(self, op: str, value: str, duration: float = 0.0) -> None:
        if self.unreachable:
            raise AdapterUnreachable("simulated robot configured unreachable")
        self.calls.append(RobotCall(op=op, value=value, timestamp=self._clock))
        self._clock += duration

    def speak(self, audio: AudioRef) -> None:
        self._record("speak", audio.text, duration=self.speak_latency)

    def show_expression(self, expression_id: str) -> None:
        self._record("show_expression", expression_id)

    def set_status(self, text: str) -> None:
        self._record("set_status", text)

    def speak_texts(self) -> list[str]:
        return [c.value for c in self.calls if c.op == "speak"]


class HttpRobot:
    """Client for an internet-connected robot exposing play-audio and
    display-image endpoints on a LAN address. Credential-free by design."""

    def __init__(self, base_url: str, timeout: float = 10.0) -> None:
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def _post(self, path: str, payload: dict) -> None:
        import httpx

        try:
            response = httpx.post(f"{self.base_url}{path}", json=payload, timeout=self.timeout)
            response.raise_for_status()
        except Exception as exc:
            raise AdapterUnreachable(f"robot call {path} failed: {exc}") from exc

    def speak(self, audio: AudioRef) -> None:
        self._post("/play-audio", audio.to_dict())

    def show_expression(self, expression_id: str) -> None:
        self._post("/display-image", {"expression": expression_id})

    def set_status(self, text: str) -> None:
        self._post("/status", {"text": text})


@dataclass
class DispatchResult:
    actor: Actor
    spoke: bool
    expression_id: str | None = None
    audio: AudioRef | None = None
    status: str | None = None


def render_speech(directive: Directive) -> str:
    """Spoken form of a directive payload; questions read their options."""
    text = directive.payload.get("text", "")
    choices = directive.payload.get("choices")
    if choices:
        letters = ["A", "B", "C", "D"]
        options = ", ".join(f"Option {letters[i]}: {c}" for i, c in enumerate(choices))
        return f"{text} {options}"
    return text


def dispatch(
    directive: Directive,
    adapter: RobotAdapter,
    expression_db: ExpressionDb,
    selector=None,
    tts: TtsProvider | None = None,
) -> DispatchResult:
    """Carry out one directive at the robot boundary.

    Robot-delegated components get expression, speech, then a waiting
    status; parent-delegated components produce only a turn reminder and
    zero speak/show_expression calls.
    """
    if directive.actor is Actor.PARENT:
        status = "parent's turn"
        adapter.set_status(status)
        return DispatchResult(actor=Actor.PARENT, spoke=False, status=status)

    text = render_speech(directive)
    expression = select_expression(directive.component, text, expression_db, selector)
    adapter.show_expression(expression.id)
    audio = synthesize(text, tts)
    adapter.speak(audio)
    adapter.set_status("waiting")
    return DispatchResult(
        actor=Actor.ROBOT, spoke=True, expression_id=expression.id, audio=audio, status="waiting"
    )
