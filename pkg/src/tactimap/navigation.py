"""Local guidance sessions: street-by-street steps and a distance beacon.

Both session kinds are plain state machines. A language model may start
one (through a tool call) but plays no part afterwards: every subsequent
announcement is computed here from position updates alone, so guidance
keeps working at full speed and cannot hallucinate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .config import EngineConfig
from .model import MapModel, Point, format_meters, project_on_segment
from .spatial import (
    Route,
    access_node,
    cardinal_of,
    closest_edge,
    route_instructions,
    shortest_route,
)


class GuidanceEventType(str, Enum):
    STEP = "STEP"
    REROUTED = "REROUTED"
    ARRIVED = "ARRIVED"
    CUE = "CUE"


@dataclass(frozen=True)
class GuidanceEvent:
    type: GuidanceEventType
    t_ms: int
    text: str
    data: dict[str, Any] = field(default_factory=dict)


def _polyline_distance(points: list[Point], pos: Point) -> float:
    if len(points) == 1:
        return pos.dist(points[0])
    best = float("inf")
    for a, b in zip(points, points[1:]):
        proj, _ = project_on_segment(pos, a, b)
        best = min(best, pos.dist(proj))
    return best


class NavSession:
    """Street-by-street walking guidance along a planned route.

    Steps are spoken one at a time: the next one only after the previous
    step's end intersection is reached (within the capture radius).
    Drifting farther than the off-route budget from the planned line
    replans from the current position and restarts the step sequence.
    """

    def __init__(
        self,
        model: MapModel,
        start: Point,
        dest_node: str,
        config: EngineConfig,
        accessible: bool = False,
    ) -> None:
        self._model = model
        self._config = config
        self._accessible = accessible
        self.dest_node = dest_node
        self.done = False
        self._started = False
        self._steps: list[tuple[str, str]] = []  # (target node id, step text)
        self._step_index = 0
        self._polyline: list[Point] = []
        self.route: Route | None = None
        self._plan(start)

    def _plan(self, start: Point) -> None:
        entry = access_node(self._model, start)
        self.route = shortest_route(self._model, entry, self.dest_node)
        instructions = route_instructions(self._model, self.route, accessible=self._accessible)

        steps: list[tuple[str, str]] = []
        entry_pos = self._model.nodes[entry].position
        if start.dist(entry_pos) > self._config.capture_radius_m:
            street = self._model.edges[closest_edge(self._model, start).edge_id].street_name
            steps.append(
                (
                    entry,
                    f"Head {cardinal_of(start, entry_pos)} on {street} for "
                    f"{format_meters(start.dist(entry_pos))} m to {self._model.node_label(entry)}.",
                )
            )
        for instr in instructions:
            steps.append((instr.end_id, instr.text))
        self._steps = steps
        self._step_index = 0
        self._polyline = [start, entry_pos] + [
            self._model.nodes[nid].position for nid in self.route.node_ids()[1:]
        ]

    def _current_text(self) -> str | None:
        if self._step_index < len(self._steps):
            return self._steps[self._step_index][1]
        return None

    def first_announcement(self) -> str | None:
        """Text of the step that :meth:`start` will announce."""
        return self._current_text()

    def start(self, t_ms: int) -> list[GuidanceEvent]:
        """First step announcement. Call once, before any update."""
        self._started = True
        text = self._current_text()
        if text is None:
            return []
        return [
            GuidanceEvent(
                GuidanceEventType.STEP,
                t_ms,
                text,
                {"step": 1, "of": len(self._steps), "destination": self.dest_node},
            )
        ]

    def update(self, t_ms: int, pos: Point) -> list[GuidanceEvent]:
        if self.done or not self._started:
            return []
        events: list[GuidanceEvent] = []
        dest_pos = self._model.nodes[self.dest_node].position

        if pos.dist(dest_pos) <= self._config.arrival_radius_m:
            self.done = True
            events.append(
                GuidanceEvent(
                    GuidanceEventType.ARRIVED,
                    t_ms,
                    f"You have arrived at {self._model.node_label(self.dest_node)}.",
                    {"destination": self.dest_node},
                )
            )
            return events

        advanced = False
        # The final step's target is the destination itself; it completes
        # through the arrival check above, never early at capture range.
        while self._step_index < len(self._steps) - 1:
            target_id, _ = self._steps[self._step_index]
            if pos.dist(self._model.nodes[target_id].position) > self._config.capture_radius_m:
                break
            self._step_index += 1
            advanced = True
            events.append(
                GuidanceEvent(
                    GuidanceEventType.STEP,
                    t_ms,
                    self._steps[self._step_index][1],
                    {
                        "step": self._step_index + 1,
                        "of": len(self._steps),
                        "destination": self.dest_node,
                    },
                )
            )
        if advanced:
            return events

        if _polyline_distance(self._polyline, pos) > self._config.off_route_budget_m:
            self._plan(pos)
            text = self._current_text()
            events.append(
                GuidanceEvent(
                    GuidanceEventType.REROUTED,
                    t_ms,
                    "You are off the planned route. " + (text or "You are already at the destination."),
                    {"wrong_direction": True, "instruction": text, "destination": self.dest_node},
                )
            )
        return events


class BeaconSession:
    """Distance-and-direction homing beacon toward a target point.

    Cues repeat on a fixed minimum interval with the current cardinal
    direction and remaining distance; arrival fires once inside the
    arrival radius.
    """

    def __init__(self, model: MapModel, target: Point, target_name: str, config: EngineConfig) -> None:
        self._model = model
        self._config = config
        self.target = target
        self.target_name = target_name
        self.done = False
        self._started = False
        self._last_cue_t: int | None = None

    def _cue(self, t_ms: int, pos: Point) -> GuidanceEvent:
        self._last_cue_t = t_ms
        d = pos.dist(self.target)
        direction = cardinal_of(pos, self.target)
        return GuidanceEvent(
            GuidanceEventType.CUE,
            t_ms,
            f"{self.target_name} is {format_meters(d)} m to the {direction}.",
            {"distance_m": d, "direction": direction, "target": self.target_name},
        )

    def start(self, t_ms: int) -> list[GuidanceEvent]:
        self._started = True
        return []

    def update(self, t_ms: int, pos: Point) -> list[GuidanceEvent]:
        if self.done or not self._started:
            return []
        if pos.dist(self.target) <= self._config.arrival_radius_m:
            self.done = True
            return [
                GuidanceEvent(
                    GuidanceEventType.ARRIVED,
                    t_ms,
                    f"You have arrived at {self.target_name}.",
                    {"target": self.target_name},
                )
            ]
        if (
            self._last_cue_t is None
            or t_ms - self._last_cue_t >= self._config.cue_min_interval_s * 1000.0
        ):
            return [self._cue(t_ms, pos)]
        return []
