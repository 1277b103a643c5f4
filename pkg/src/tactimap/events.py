"""Wire events: the engine's outward-facing event stream.

Every user-audible reaction of the engine (speech feedback, answers,
guidance announcements, error notices) is emitted as one event with a
session-scoped sequence number, a type, and a JSON payload. The same
events serialize as JSON lines for replay logs and as server-sent events
for streaming clients, with identical content in both framings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class WireEventType(str, Enum):
    ENTER = "ENTER"
    LEAVE = "LEAVE"
    DWELL = "DWELL"
    AMBIENT_ON = "AMBIENT_ON"
    AMBIENT_OFF = "AMBIENT_OFF"
    BUSY_TICK = "BUSY_TICK"
    ANSWER = "ANSWER"
    NAV_STEP = "NAV_STEP"
    NAV_REROUTE = "NAV_REROUTE"
    NAV_ARRIVED = "NAV_ARRIVED"
    BEACON_CUE = "BEACON_CUE"
    BEACON_ARRIVED = "BEACON_ARRIVED"
    ERROR = "ERROR"


@dataclass(frozen=True)
class WireEvent:
    seq: int
    type: WireEventType
    payload: dict[str, Any]

    def to_json(self) -> dict[str, Any]:
        return {"seq": self.seq, "type": self.type.value, "payload": self.payload}

    def to_line(self) -> str:
        """One JSON line, keys sorted, compact: the replay log format."""
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def to_sse(self) -> str:
        """Server-sent-event framing of the same content."""
        return f"id: {self.seq}\nevent: {self.type.value}\ndata: {json.dumps(self.payload, sort_keys=True)}\n\n"


def parse_line(line: str) -> WireEvent:
    doc = json.loads(line)
    return WireEvent(seq=int(doc["seq"]), type=WireEventType(doc["type"]), payload=dict(doc["payload"]))


@dataclass
class EventLog:
    """Ordered sink assigning sequence numbers from 1."""

    events: list[WireEvent] = field(default_factory=list)

    def append(self, type: WireEventType, payload: dict[str, Any]) -> WireEvent:
        event = WireEvent(seq=len(self.events) + 1, type=type, payload=payload)
        self.events.append(event)
        return event

    def lines(self) -> str:
        return "\n".join(e.to_line() for e in self.events) + ("\n" if self.events else "")
