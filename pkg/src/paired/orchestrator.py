"""Glue between the session engine and the robot boundary.

A SessionRunner owns one session: it serializes incoming events, keeps
the robot adapter in step with emitted directives, and fans committed
frames out to listeners (persistence, push subscribers). In parent
takeover the robot module receives no traffic at all, not even status
updates; the parent is using the content as a resource on their own.
"""

from __future__ import annotations

import threading
from typing import Callable

from paired import session as se
from paired.contentgen import ComponentKind
from paired.errors import AdapterUnreachable, PairedError
from paired.robot import ExpressionDb, RobotEvent, dispatch, map_robot_event
from paired.session import Actor, Directive, EventKind, Mode, SETScenario, SessionState


class SessionRunner:
    """Single-writer wrapper around one SessionState.

    ``on_commit(state, new_events, directive)`` fires after each applied
    operation, once the robot side has accepted any emitted directive.
    """

    def __init__(
        self,
        state: SessionState,
        adapter=None,
        expression_db: ExpressionDb | None = None,
        tts=None,
        selector=None,
        on_commit: Callable | None = None,
    ) -> None:
        self.state = state
        self.adapter = adapter
        self.expression_db = expression_db or ExpressionDb.builtin()
        self.tts = tts
        self.selector = selector
        self.on_commit = on_commit
        self._lock = threading.Lock()

    # -- dispatch ------------------------------------------------------------

    def _should_dispatch(self) -> bool:
        return self.adapter is not None and self.state.mode is not Mode.PARENT_TAKEOVER

    def _dispatch(self, directive: Directive) -> None:
        if self._should_dispatch():
            dispatch(directive, self.adapter, self.expression_db, selector=self.selector, tts=self.tts)

    def _commit(self, new_events, directive: Directive | None) -> None:
        if self.on_commit is not None:
            self.on_commit(self.state, list(new_events), directive)

    # -- operations ----------------------------------------------------------

    def emit_initial(self) -> Directive:
        """Dispatch the directive for the freshly started session."""
        with self._lock:
            directive = se.current_directive(self.state)
            assert directive is not None
            self._dispatch(directive)
            self._commit(self.state.event_log[:1], directive)
            return directive

    def handle(self, kind: str, args: dict | None = None, timestamp: float | None = None):
        """Apply one named event; returns (state, directive_or_none).

        Accepted kinds: next, repeat, set_mode, set_delegation,
        scenario_tag, bumper_left, bumper_right.
        """
        args = args or {}
        if kind in (RobotEvent.BUMPER_LEFT.value, RobotEvent.BUMPER_RIGHT.value):
            mapped = map_robot_event(RobotEvent(kind))
            kind = mapped.value

        with self._lock:
            before = len(self.state.event_log)
            cursor = (self.state.page_index, self.state.component_index, self.state.status)
            try:
                directive = self._handle_locked(kind, args, timestamp)
            except AdapterUnreachable:
                # Roll the uncommitted events back: the session is unchanged
                # when the robot could not accept the directive.
                del self.state.event_log[before:]
                self.state.page_index, self.state.component_index, self.state.status = cursor
                raise
            self._commit(self.state.event_log[before:], directive)
            return self.state, directive

    def _handle_locked(self, kind: str, args: dict, timestamp: float | None) -> Directive | None:
        if kind == EventKind.NEXT.value:
            _, directive = se.advance(self.state, timestamp=timestamp)
            if directive is not None:
                self._dispatch(directive)
            return directive
        if kind == EventKind.REPEAT.value:
            directive = se.repeat(self.state, timestamp=timestamp)
            self._dispatch(directive)
            return directive
        if kind == EventKind.SET_MODE.value:
            se.set_mode(self.state, Mode(args["mode"]), timestamp=timestamp)
            return None
        if kind == EventKind.SET_DELEGATION.value:
            se.set_delegation(
                self.state, ComponentKind(args["component"]), Actor(args["actor"]), timestamp=timestamp
            )
            return None
        if kind == EventKind.SCENARIO_TAG.value:
            se.tag_scenario(self.state, SETScenario.from_dict(args), timestamp=timestamp)
            return None
        raise PairedError(f"unknown session event kind {kind!r}")
