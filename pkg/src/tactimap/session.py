"""Interactive session: one user, one map, one event stream.

Glues the pointer pipeline, the chat loop and guidance into a single
stateful object driven by timestamps. All timing is explicit: callers
(replay, the HTTP service) push camera frames and control actions with a
millisecond clock, and every audible reaction comes back as wire events.
That keeps a full session deterministic and byte-reproducible from a
recorded trace.

While the engine works on an answer, a short busy notice is due every
few seconds so the user knows it has not gone silent; the notices stop
as soon as the answer is delivered.
"""
from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Any

from .config import EngineConfig
from .conversation import BackendError, ChatBackend, Conversation, ConversationError, TurnResult
from .events import EventLog, WireEvent, WireEventType
from .homography import Homography
from .model import MapModel, Point, feature_announcement, feature_details
from .navigation import BeaconSession, GuidanceEvent, GuidanceEventType, NavSession
from .pointer import (
    FeedbackMachine,
    HandFrame,
    PointerEventType,
    PointerTracker,
    SnapEngine,
    parse_trace,
)
from .tools import ResolvedPlace, ToolContext, ToolError, resolve_place


@dataclass
class PendingTurn:
    question: str
    release_t_ms: int
    answer_t_ms: int
    result: TurnResult
    ticks: int = 0
    halted: bool = False


class Session:
    """Timestamp-driven interactive session emitting wire events.

    ``observe`` feeds one camera frame; ``advance`` moves the clock with
    no camera input. Both first flush anything that became due (busy
    ticks, a finished answer) so events always appear in time order.
    """

    def __init__(
        self,
        model: MapModel,
        preset: int,
        config: EngineConfig,
        backend: ChatBackend,
        homography: Homography | None = None,
        now: datetime | None = None,
    ) -> None:
        self.model = model
        self.config = config
        self.log = EventLog()
        self._now = now
        self._snap = SnapEngine(model, config)
        self._tracker = PointerTracker(homography or Homography.identity(), model, config)
        self._feedback = FeedbackMachine(config)
        self.context = ToolContext(
            model=model,
            config=config,
            discoverable=self._snap.discoverable_pois,
            start_nav=self._start_nav,
            start_beacon=self._start_beacon,
        )
        self.conversation = Conversation(model, preset, config, backend, context=self.context)
        self._pending: PendingTurn | None = None
        self._pressed = False
        self._press_snapshot: Point | None = None
        self._last_smoothed: Point | None = None
        self._guidance: NavSession | BeaconSession | None = None
        self._guidance_started = False
        self._paused = False

    # -- guidance wiring (called from inside tool dispatch) -----------------

    def _start_nav(self, start: Point, dest_node: str, dest_name: str, accessible: bool) -> str | None:
        nav = NavSession(self.model, start, dest_node, self.config, accessible=accessible)
        self._guidance = nav
        self._guidance_started = False
        return nav.first_announcement()

    def _start_beacon(self, target: Point, target_name: str) -> None:
        self._guidance = BeaconSession(self.model, target, target_name, self.config)
        self._guidance_started = False

    def _wire_guidance(self, guidance_events: list[GuidanceEvent]) -> list[WireEvent]:
        out: list[WireEvent] = []
        beacon = isinstance(self._guidance, BeaconSession)
        for ge in guidance_events:
            payload: dict[str, Any] = {"t_ms": ge.t_ms, "text": ge.text, **ge.data}
            if ge.type is GuidanceEventType.STEP:
                out.append(self.log.append(WireEventType.NAV_STEP, payload))
            elif ge.type is GuidanceEventType.REROUTED:
                out.append(self.log.append(WireEventType.NAV_REROUTE, payload))
            elif ge.type is GuidanceEventType.CUE:
                out.append(self.log.append(WireEventType.BEACON_CUE, payload))
            elif ge.type is GuidanceEventType.ARRIVED:
                kind = WireEventType.BEACON_ARRIVED if beacon else WireEventType.NAV_ARRIVED
                out.append(self.log.append(kind, payload))
                self._guidance = None
                self._guidance_started = False
        return out

    # -- due busy ticks and answers ------------------------------------------

    def _flush_due(self, t_ms: int) -> list[WireEvent]:
        events: list[WireEvent] = []
        p = self._pending
        if p is None:
            return events
        interval_ms = self.config.busy_tick_interval_s * 1000.0
        while True:
            tick_t = p.release_t_ms + interval_ms * (p.ticks + 1)
            if tick_t > t_ms or tick_t >= p.answer_t_ms:
                break
            p.ticks += 1
            events.append(
                self.log.append(WireEventType.BUSY_TICK, {"t_ms": int(tick_t), "n": p.ticks})
            )
        if p.answer_t_ms <= t_ms:
            events.append(
                self.log.append(
                    WireEventType.ANSWER,
                    {
                        "t_ms": p.answer_t_ms,
                        "text": p.result.answer,
                        "question": p.question,
                        "announced": not p.halted,
                        "tool_calls": len(p.result.tool_calls),
                    },
                )
            )
            self._pending = None
            if self._guidance is not None and not self._guidance_started:
                self._guidance_started = True
                events.extend(self._wire_guidance(self._guidance.start(p.answer_t_ms)))
        return events

    # -- camera input --------------------------------------------------------

    def observe(self, t_ms: int, hands: list[HandFrame]) -> list[WireEvent]:
        """Process one camera frame and everything due up to its time."""
        events = self._flush_due(t_ms)
        sample = self._tracker.update(t_ms, hands)
        self._last_smoothed = sample.smoothed if sample is not None else None
        hit = self._snap.update(sample.smoothed if sample is not None else None)
        for pe in self._feedback.update(t_ms, sample, hit):
            if self._paused:
                continue
            payload = {"t_ms": pe.t_ms}
            if pe.kind is not None and pe.feature_id is not None:
                payload.update({"kind": pe.kind.value, "feature_id": pe.feature_id})
                if pe.type is PointerEventType.ENTER:
                    payload["text"] = feature_announcement(self.model, pe.kind.value, pe.feature_id)
                elif pe.type is PointerEventType.DWELL:
                    payload["text"] = feature_details(self.model, pe.kind.value, pe.feature_id)
            events.append(self.log.append(WireEventType(pe.type.value), payload))
        if (
            self._guidance is not None
            and self._guidance_started
            and not self._paused
            and sample is not None
        ):
            events.extend(self._wire_guidance(self._guidance.update(t_ms, sample.smoothed)))
        return events

    def advance(self, t_ms: int) -> list[WireEvent]:
        """Move the clock without camera input."""
        return self._flush_due(t_ms)

    # -- push-to-talk ----------------------------------------------------------

    def press_talk(self, t_ms: int) -> list[WireEvent]:
        """Button down: bind the pointing snapshot the question refers to."""
        events = self._flush_due(t_ms)
        self._pressed = True
        self._press_snapshot = self._last_smoothed
        return events

    def release_talk(self, t_ms: int, utterance: str) -> list[WireEvent]:
        """Button up: the utterance is final, run the chat turn.

        The answer is computed now but announced at the backend's
        reported latency; busy notices fill the wait.
        """
        events = self._flush_due(t_ms)
        if self._pending is not None:
            events.append(
                self.log.append(
                    WireEventType.ERROR,
                    {"t_ms": t_ms, "message": "still working on the previous question"},
                )
            )
            return events
        if not self._pressed:
            events.append(
                self.log.append(
                    WireEventType.ERROR,
                    {"t_ms": t_ms, "message": "talk released without a press"},
                )
            )
            return events
        self._pressed = False
        snapshot = self._press_snapshot
        self._press_snapshot = None
        guidance_before = self._guidance
        try:
            result = self.conversation.ask(utterance, position=snapshot, now=self._now)
        except (BackendError, ConversationError) as exc:
            if self._guidance is not guidance_before and not self._guidance_started:
                self._guidance = guidance_before  # failed turn must not leave half-started guidance
            events.append(
                self.log.append(WireEventType.ERROR, {"t_ms": t_ms, "message": str(exc)})
            )
            return events
        self._pending = PendingTurn(
            question=utterance,
            release_t_ms=t_ms,
            answer_t_ms=t_ms + int(round(result.latency_s * 1000.0)),
            result=result,
        )
        events.extend(self._flush_due(t_ms))
        return events

    # -- flow control ------------------------------------------------------------

    def halt(self, t_ms: int) -> list[WireEvent]:
        """Stop the current announcement: a pending answer arrives silent."""
        events = self._flush_due(t_ms)
        if self._pending is not None:
            self._pending.halted = True
        return events

    def pause(self, t_ms: int) -> list[WireEvent]:
        events = self._flush_due(t_ms)
        self._paused = True
        return events

    def resume(self, t_ms: int) -> list[WireEvent]:
        events = self._flush_due(t_ms)
        self._paused = False
        return events

    def stop_guidance(self, t_ms: int) -> list[WireEvent]:
        events = self._flush_due(t_ms)
        self._guidance = None
        self._guidance_started = False
        return events

    def set_now(self, now: datetime | None) -> None:
        self._now = now

    @property
    def last_position(self) -> Point | None:
        return self._last_smoothed

    # -- replay directives -------------------------------------------------------

    def _resolve_for_replay(self, arg: str) -> ResolvedPlace:
        self.context.position = self._last_smoothed
        return resolve_place(self.context, arg)

    def apply_directive(self, t_ms: int, command: str, arg: str) -> list[WireEvent]:
        if command == "press":
            return self.press_talk(t_ms)
        if command == "release":
            return self.release_talk(t_ms, arg)
        if command == "halt":
            return self.halt(t_ms)
        if command == "pause":
            return self.pause(t_ms)
        if command == "resume":
            return self.resume(t_ms)
        if command == "stop_guidance":
            return self.stop_guidance(t_ms)
        if command == "settime":
            self.set_now(datetime.fromisoformat(arg))
            return self.advance(t_ms)
        if command == "start_nav" or command == "start_beacon":
            events = self._flush_due(t_ms)
            try:
                place = self._resolve_for_replay(arg)
                if command == "start_nav":
                    if self._last_smoothed is None:
                        raise ToolError("no pointing position to start guidance from")
                    self._start_nav(self._last_smoothed, place.node_id, place.name, False)
                else:
                    self._start_beacon(place.point, place.name)
            except ToolError as exc:
                events.append(self.log.append(WireEventType.ERROR, {"t_ms": t_ms, "message": str(exc)}))
                return events
            self._guidance_started = True
            assert self._guidance is not None
            events.extend(self._wire_guidance(self._guidance.start(t_ms)))
            return events
        raise ValueError(f"unknown trace directive {command!r}")


def replay(
    model: MapModel,
    preset: int,
    config: EngineConfig,
    backend: ChatBackend,
    trace_text: str,
    homography: Homography | None = None,
    now: datetime | None = None,
) -> EventLog:
    """Run a recorded pointer trace through a fresh session."""
    session = Session(model, preset, config, backend, homography=homography, now=now)
    for step in parse_trace(trace_text):
        if step.camera:
            session.observe(step.t_ms, list(step.hands))
        elif not step.directives:
            session.advance(step.t_ms)
        for directive in step.directives:
            session.apply_directive(directive.t_ms, directive.command, directive.arg)
    return session.log
