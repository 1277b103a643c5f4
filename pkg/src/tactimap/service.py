"""HTTP face of the engine: JSON endpoints plus a live event stream.

One process serves one map at one instruction preset. Clients create a
session, push camera frames and push-to-talk actions into it with their
own millisecond timestamps, and listen to the resulting wire events over
a server-sent-events stream (the same events also come back on each
POST, so simple clients can skip streaming entirely).

Handlers run on the event loop and session methods are synchronous, so
each session's events stay strictly ordered without extra locking.
"""
from __future__ import annotations

import asyncio
import itertools
from dataclasses import dataclass, field as dataclass_field
from datetime import datetime
from typing import Any

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from .config import EngineConfig
from .conversation import BackendError, ChatBackend, Conversation, ConversationError
from .model import MapModel, Point, to_document
from .pointer import LANDMARK_COUNT, HandFrame
from .session import Session
from .spatial import RouteNotFound, route_instructions, shortest_route
from .tools import ToolContext, ToolError, resolve_place


class AskRequest(BaseModel):
    text: str
    position: list[float] | None = None
    now: str | None = None


class FrameModel(BaseModel):
    t_ms: int
    hand: str  # "left" | "right" | "none"
    tip: list[float] | None = None
    landmarks: list[float] | None = None  # 40 numbers, 20 (x, y) pairs


class FramesRequest(BaseModel):
    frames: list[FrameModel]


class ControlRequest(BaseModel):
    t_ms: int
    action: str  # press | release | halt | pause | resume | stop_guidance | advance
    utterance: str | None = None


class SessionRequest(BaseModel):
    now: str | None = None


@dataclass
class LiveSession:
    session: Session
    changed: asyncio.Event = dataclass_field(default_factory=asyncio.Event)

    def notify(self) -> None:
        self.changed.set()


def _parse_now(raw: str | None) -> datetime | None:
    if raw is None:
        return None
    try:
        return datetime.fromisoformat(raw)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=f"bad timestamp {raw!r}: {exc}") from exc


def _parse_position(raw: list[float] | None) -> Point | None:
    if raw is None:
        return None
    if len(raw) != 2:
        raise HTTPException(status_code=400, detail="position must be [x, y]")
    return Point(float(raw[0]), float(raw[1]))


def _to_hand_frames(frames: list[FrameModel]) -> list[tuple[int, list[HandFrame]]]:
    """Group posted frames by timestamp, preserving order."""
    grouped: dict[int, list[HandFrame]] = {}
    order: list[int] = []
    for f in frames:
        if f.t_ms not in grouped:
            grouped[f.t_ms] = []
            order.append(f.t_ms)
        if f.hand == "none":
            continue
        if f.hand not in ("left", "right"):
            raise HTTPException(status_code=400, detail=f"unknown hand {f.hand!r}")
        if f.tip is None or len(f.tip) != 2:
            raise HTTPException(status_code=400, detail="each hand frame needs tip: [x, y]")
        landmarks = None
        if f.landmarks is not None:
            if len(f.landmarks) != 2 * LANDMARK_COUNT:
                raise HTTPException(
                    status_code=400,
                    detail=f"landmarks must hold {2 * LANDMARK_COUNT} numbers, got {len(f.landmarks)}",
                )
            landmarks = tuple(
                (f.landmarks[i], f.landmarks[i + 1]) for i in range(0, len(f.landmarks), 2)
            )
        grouped[f.t_ms].append(
            HandFrame(t_ms=f.t_ms, hand=f.hand, tip=(f.tip[0], f.tip[1]), landmarks=landmarks)
        )
    return [(t, grouped[t]) for t in order]


def create_app(
    model: MapModel,
    preset: int,
    config: EngineConfig,
    backend: ChatBackend,
) -> FastAPI:
    app = FastAPI(title="tactimap", docs_url=None, redoc_url=None)
    sessions: dict[str, LiveSession] = {}
    ids = itertools.count(1)

    def live(sid: str) -> LiveSession:
        if sid not in sessions:
            raise HTTPException(status_code=404, detail=f"unknown session {sid!r}")
        return sessions[sid]

    @app.get("/health")
    def health() -> dict[str, Any]:
        return {"ok": True, "preset": preset, "map": model.frame.map_name}

    @app.get("/map")
    def map_document() -> dict[str, Any]:
        return to_document(model)

    @app.post("/ask")
    def ask(request: AskRequest) -> dict[str, Any]:
        conversation = Conversation(model, preset, config, backend)
        try:
            result = conversation.ask(
                request.text,
                position=_parse_position(request.position),
                now=_parse_now(request.now),
            )
        except (BackendError, ConversationError) as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        return {
            "answer": result.answer,
            "tool_calls": list(result.tool_calls),
            "combined_prompt": result.combined_prompt,
        }

    @app.get("/route")
    def route(
        from_place: str = Query(alias="from"),
        to_place: str = Query(alias="to"),
        accessible: bool = False,
    ) -> dict[str, Any]:
        ctx = ToolContext(model=model, config=config)
        try:
            a = resolve_place(ctx, from_place)
            b = resolve_place(ctx, to_place)
            found = shortest_route(model, a.node_id, b.node_id)
        except (ToolError, RouteNotFound) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        steps = route_instructions(model, found, accessible=accessible)
        return {
            "from": a.name,
            "to": b.name,
            "nodes": found.node_ids(),
            "length_m": found.length_m,
            "walking_time_s": found.length_m / config.walking_speed_mps,
            "instructions": [s.text for s in steps],
        }

    @app.post("/sessions")
    def create_session(request: SessionRequest | None = None) -> dict[str, Any]:
        sid = f"s{next(ids)}"
        now = _parse_now(request.now) if request else None
        sessions[sid] = LiveSession(session=Session(model, preset, config, backend, now=now))
        return {"session_id": sid}

    @app.post("/sessions/{sid}/frames")
    def push_frames(sid: str, request: FramesRequest) -> dict[str, Any]:
        ls = live(sid)
        events = []
        for t_ms, hands in _to_hand_frames(request.frames):
            events.extend(ls.session.observe(t_ms, hands))
        if events:
            ls.notify()
        return {"events": [e.to_json() for e in events]}

    @app.post("/sessions/{sid}/control")
    def control(sid: str, request: ControlRequest) -> dict[str, Any]:
        ls = live(sid)
        s = ls.session
        if request.action == "press":
            events = s.press_talk(request.t_ms)
        elif request.action == "release":
            events = s.release_talk(request.t_ms, request.utterance or "")
        elif request.action == "halt":
            events = s.halt(request.t_ms)
        elif request.action == "pause":
            events = s.pause(request.t_ms)
        elif request.action == "resume":
            events = s.resume(request.t_ms)
        elif request.action == "stop_guidance":
            events = s.stop_guidance(request.t_ms)
        elif request.action == "advance":
            events = s.advance(request.t_ms)
        else:
            raise HTTPException(status_code=400, detail=f"unknown action {request.action!r}")
        if events:
            ls.notify()
        return {"events": [e.to_json() for e in events]}

    @app.get("/sessions/{sid}/events")
    async def stream_events(sid: str, request: Request, after: int = 0) -> StreamingResponse:
        ls = live(sid)

        async def generate():
            seq = after
            while True:
                if await request.is_disconnected():
                    return
                fresh = [e for e in ls.session.log.events if e.seq > seq]
                if fresh:
                    for event in fresh:
                        seq = event.seq
                        yield event.to_sse()
                    continue
                ls.changed.clear()
                try:
                    await asyncio.wait_for(ls.changed.wait(), timeout=15.0)
                except asyncio.TimeoutError:
                    yield ": keep-alive\n\n"

        return StreamingResponse(generate(), media_type="text/event-stream")

    return app
