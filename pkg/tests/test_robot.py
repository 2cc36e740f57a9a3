import collections

import httpx
import pytest

from paired.contentgen import ComponentKind
from paired.errors import AdapterUnreachable, TtsUnavailable
from paired.orchestrator import SessionRunner
from paired.robot import (
    ExpressionDb,
    ExpressionEntry,
    HttpRobot,
    RobotEvent,
    SimulatedRobot,
    dispatch,
    map_robot_event,
    render_speech,
    select_expression,
)
from paired.session import (
    Actor,
    EventKind,
    Mode,
    SessionStatus,
    current_directive,
    start_session,
)
from paired.tts import AudioRef, HttpTts, NullTts, synthesize


@pytest.fixture
def expression_db():
    return ExpressionDb.builtin()


class TestEventMapping:
    def test_left_is_repeat_right_is_next(self):
        assert map_robot_event(RobotEvent.BUMPER_LEFT) is EventKind.REPEAT
        assert map_robot_event(RobotEvent.BUMPER_RIGHT) is EventKind.NEXT

    def test_total_over_event_space(self):
        for event in RobotEvent:
            assert map_robot_event(event) in (EventKind.REPEAT, EventKind.NEXT)


class TestExpressionDb:
    def test_builtin_has_neutral(self, expression_db):
        assert expression_db.neutral.id == "neutral"
        assert "celebratory" in expression_db.ids()

    def test_missing_neutral_rejected(self):
        entry = ExpressionEntry(id="happy", label="Happy", description="d", face_asset="f.png")
        with pytest.raises(ValueError):
            ExpressionDb([entry])

    def test_duplicate_ids_rejected(self):
        entry = ExpressionEntry(id="neutral", label="N", description="d", face_asset="f.png")
        with pytest.raises(ValueError):
            ExpressionDb([entry, entry])


class TestSelectExpression:
    def test_component_defaults(self, expression_db):
        cases = {
            ComponentKind.BOOK_TEXT: "happy",
            ComponentKind.QUESTION: "curious",
            ComponentKind.EXPLANATION: "thinking",
            ComponentKind.MOTIVATION: "celebratory",
        }
        for component, expected in cases.items():
            assert select_expression(component, "The fox runs.", expression_db).id == expected

    def test_celebratory_keyword_wins(self, expression_db):
        chosen = select_expression(ComponentKind.EXPLANATION, "Great job, you got it!", expression_db)
        assert chosen.id == "celebratory"

    def test_empty_text_is_neutral(self, expression_db):
        assert select_expression(ComponentKind.QUESTION, "   ", expression_db).id == "neutral"

    def test_selector_override(self, expression_db):
        chosen = select_expression(
            ComponentKind.QUESTION, "text", expression_db, selector=lambda c, t, ids: "thinking"
        )
        assert chosen.id == "thinking"

    def test_unknown_selector_id_falls_back_to_neutral(self, expression_db):
        chosen = select_expression(
            ComponentKind.QUESTION, "text", expression_db, selector=lambda c, t, ids: "no-such-face"
        )
        assert chosen.id == "neutral"

    def test_total_over_all_components(self, expression_db):
        for component in ComponentKind:
            assert select_expression(component, "anything", expression_db) is not None


class TestDispatch:
    def _directive(self, activity, mode):
        state, directive = start_session(activity, mode)
        return state, directive

    def test_robot_actor_speaks_with_expression(self, one_page_setup, expression_db):
        _, activity, _ = one_page_setup
        _, directive = self._directive(activity, Mode.ROBOT_TAKEOVER)
        robot = SimulatedRobot()
        result = dispatch(directive, robot, expression_db)
        assert result.spoke
        ops = [c.op for c in robot.calls]
        assert ops == ["show_expression", "speak", "set_status"]
        assert robot.calls[-1].value == "waiting"

    def test_parent_actor_gets_status_only(self, one_page_setup, expression_db):
        _, activity, _ = one_page_setup
        _, directive = self._directive(activity, Mode.PARENT_LED)
        robot = SimulatedRobot()
        result = dispatch(directive, robot, expression_db)
        assert not result.spoke
        assert [c.op for c in robot.calls] == ["set_status"]
        assert robot.calls[0].value == "parent's turn"

    def test_question_speech_reads_options(self, one_page_setup, expression_db):
        _, activity, _ = one_page_setup
        state, _ = self._directive(activity, Mode.ROBOT_TAKEOVER)
        from paired.session import advance

        _, directive = advance(state)
        assert directive.component is ComponentKind.QUESTION
        speech = render_speech(directive)
        assert "Option A:" in speech and "Option D:" in speech

    def test_speak_latency_advances_clock(self, one_page_setup, expression_db):
        _, activity, _ = one_page_setup
        _, directive = self._directive(activity, Mode.ROBOT_TAKEOVER)
        robot = SimulatedRobot(speak_latency=1.5)
        dispatch(directive, robot, expression_db)
        dispatch(directive, robot, expression_db)
        speaks = [c for c in robot.calls if c.op == "speak"]
        assert speaks[1].timestamp - speaks[0].timestamp == pytest.approx(1.5)

    def test_unreachable_adapter_raises(self, one_page_setup, expression_db):
        _, activity, _ = one_page_setup
        _, directive = self._directive(activity, Mode.ROBOT_TAKEOVER)
        robot = SimulatedRobot(unreachable=True)
        with pytest.raises(AdapterUnreachable):
            dispatch(directive, robot, expression_db)


class TestRunner:
    def _run_to_completion(self, activity, mode, robot):
        state, _ = start_session(activity, mode)
        runner = SessionRunner(state, adapter=robot)
        runner.emit_initial()
        directives = [current_directive(state)]
        while state.status is SessionStatus.RUNNING:
            _, directive = runner.handle("next")
            if directive is not None:
                directives.append(directive)
        return state, directives

    def test_robot_silence_invariant(self, three_page_setup):
        _, activity, _ = three_page_setup
        robot = SimulatedRobot()
        state, directives = self._run_to_completion(activity, Mode.ROBOT_LED, robot)
        robot_payloads = [render_speech(d) for d in directives if d.actor is Actor.ROBOT]
        assert collections.Counter(robot.speak_texts()) == collections.Counter(robot_payloads)

    def test_parent_takeover_robot_hears_nothing(self, three_page_setup):
        _, activity, _ = three_page_setup
        robot = SimulatedRobot()
        self._run_to_completion(activity, Mode.PARENT_TAKEOVER, robot)
        assert robot.calls == []

    def test_bumper_events_route_through_mapping(self, one_page_setup):
        _, activity, _ = one_page_setup
        state, _ = start_session(activity, Mode.ROBOT_TAKEOVER)
        runner = SessionRunner(state, adapter=SimulatedRobot())
        runner.emit_initial()
        _, directive = runner.handle("bumper_right")
        assert directive.component is ComponentKind.QUESTION
        again = runner.handle("bumper_left")[1]
        assert again.payload == directive.payload

    def test_unreachable_leaves_cursor_unmoved(self, one_page_setup):
        _, activity, _ = one_page_setup
        robot = SimulatedRobot()
        state, _ = start_session(activity, Mode.ROBOT_TAKEOVER)
        runner = SessionRunner(state, adapter=robot)
        runner.emit_initial()
        before_log = len(state.event_log)
        before_cursor = (state.page_index, state.component_index, state.status)
        robot.unreachable = True
        with pytest.raises(AdapterUnreachable):
            runner.handle("next")
        assert len(state.event_log) == before_log
        assert (state.page_index, state.component_index, state.status) == before_cursor
        robot.unreachable = False
        _, directive = runner.handle("next")
        assert directive.component is ComponentKind.QUESTION


class TestTts:
    def test_null_tts_passthrough(self):
        audio = NullTts().synthesize("hello")
        assert audio == AudioRef(kind="text", text="hello")

    def test_degrades_when_provider_fails(self, caplog):
        class Broken:
            def synthesize(self, text):
                raise TtsUnavailable("endpoint down")

        with caplog.at_level("WARNING"):
            audio = synthesize("hello", Broken())
        assert audio.kind == "text"
        assert audio.text == "hello"
        assert any("degrading" in r.message for r in caplog.records)

    def test_http_tts_caches_audio(self, tmp_path, monkeypatch):
        def fake_post(url, json=None, headers=None, timeout=None):
            request = httpx.Request("POST", url)
            assert headers["Authorization"] == "Bearer sekrit"
            return httpx.Response(200, content=b"PCM", request=request)

        monkeypatch.setattr(httpx, "post", fake_post)
        provider = HttpTts("http://tts.local/say", cache_dir=tmp_path, credential="sekrit")
        audio = provider.synthesize("hello")
        assert audio.kind == "audio"
        assert audio.path is not None
        from pathlib import Path

        assert Path(audio.path).read_bytes() == b"PCM"

    def test_http_tts_error_raises_unavailable(self, tmp_path, monkeypatch):
        def fake_post(url, json=None, headers=None, timeout=None):
            return httpx.Response(500, request=httpx.Request("POST", url))

        monkeypatch.setattr(httpx, "post", fake_post)
        provider = HttpTts("http://tts.local/say", cache_dir=tmp_path)
        with pytest.raises(TtsUnavailable):
            provider.synthesize("hello")


class TestHttpRobot:
    def test_posts_to_expected_paths(self, monkeypatch):
        posts = []

        def fake_post(url, json=None, timeout=None):
            posts.append((url, json))
            return httpx.Response(200, request=httpx.Request("POST", url))

        monkeypatch.setattr(httpx, "post", fake_post)
        robot = HttpRobot("http://robot.lan:8080/")
        robot.speak(AudioRef(kind="text", text="hi"))
        robot.show_expression("happy")
        robot.set_status("waiting")
        assert [u for u, _ in posts] == [
            "http://robot.lan:8080/play-audio",
            "http://robot.lan:8080/display-image",
            "http://robot.lan:8080/status",
        ]
        assert posts[1][1] == {"expression": "happy"}

    def test_connection_error_wrapped(self, monkeypatch):
        def fake_post(url, json=None, timeout=None):
            raise httpx.ConnectError("refused")

        monkeypatch.setattr(httpx, "post", fake_post)
        robot = HttpRobot("http://robot.lan:8080")
        with pytest.raises(AdapterUnreachable):
            robot.set_status("x")
