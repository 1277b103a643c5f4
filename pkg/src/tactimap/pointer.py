"""Pointing-finger tracking over the physical map.

Takes per-frame hand landmark sets from a camera, decides which hands are
performing a pointing gesture, projects the index fingertip onto the map
plane, smooths it, arbitrates between two pointing hands, and snaps the
position onto nearby map features with hysteresis so small tremors never
flicker the selection. A small state machine turns the resulting feature
occupancy into speech-feedback events.

Hand landmarks are 20 image points ordered as four points per finger:
index (0-3), middle (4-7), ring (8-11), little (12-15), thumb (16-19),
base to tip. The thumb plays no part in gesture classification.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .config import EngineConfig
from .homography import CalibrationError, Homography
from .model import MapModel, Point, project_on_segment

INDEX = slice(0, 4)
MIDDLE = slice(4, 8)
RING = slice(8, 12)
LITTLE = slice(12, 16)
THUMB = slice(16, 20)
INDEX_TIP = 3
LANDMARK_COUNT = 20


def max_bend_deg(chain: list[tuple[float, float]]) -> float:
    """Largest turn angle between consecutive segments of a point chain."""
    worst = 0.0
    prev: tuple[float, float] | None = None
    for (x1, y1), (x2, y2) in zip(chain, chain[1:]):
        seg = (x2 - x1, y2 - y1)
        if math.hypot(*seg) < 1e-9:
            continue  # coincident landmarks carry no direction
        if prev is not None:
            dot = prev[0] * seg[0] + prev[1] * seg[1]
            cross = prev[0] * seg[1] - prev[1] * seg[0]
            worst = max(worst, abs(math.degrees(math.atan2(cross, dot))))
        prev = seg
    return worst


def hand_is_pointing(landmarks: list[tuple[float, float]], tol_deg: float) -> bool:
    """Extended index finger plus curled middle, ring and little fingers.

    The index chain must stay within ``tol_deg`` of straight while each of
    the other three fingers (thumb excluded) must bend beyond it.
    """
    if len(landmarks) != LANDMARK_COUNT:
        raise ValueError(f"expected {LANDMARK_COUNT} landmarks, got {len(landmarks)}")
    if max_bend_deg(landmarks[INDEX]) > tol_deg:
        return False
    return all(max_bend_deg(landmarks[f]) > tol_deg for f in (MIDDLE, RING, LITTLE))


@dataclass(frozen=True)
class HandFrame:
    """One hand observation in one camera frame (image pixel coordinates)."""

    t_ms: int
    hand: str  # "left" | "right"
    tip: tuple[float, float]
    landmarks: tuple[tuple[float, float], ...] | None = None  # None = pre-classified as pointing

    def pointing(self, tol_deg: float) -> bool:
        if self.landmarks is None:
            return True
        return hand_is_pointing(list(self.landmarks), tol_deg)


@dataclass(frozen=True)
class PointerSample:
    t_ms: int
    hand: str
    raw: Point  # fingertip in map meters, this frame
    smoothed: Point  # window mean in map meters


class PointerTracker:
    """Smooths and arbitrates pointing positions in map coordinates.

    A hand is eligible in a frame when it is present, classified as
    pointing, and its fingertip projects inside the map bounds. With two
    eligible hands the one that moved farther across its smoothing window
    is the deliberate pointer; ties keep the previously active hand.
    """

    def __init__(self, homography: Homography, model: MapModel, config: EngineConfig) -> None:
        self._h = homography
        self._model = model
        self._config = config
        self._windows: dict[str, deque[Point]] = {}
        self._active: str | None = None

    def _on_map(self, p: Point) -> bool:
        f = self._model.frame
        return 0.0 <= p.x <= f.width_m and 0.0 <= p.y <= f.height_m

    def update(self, t_ms: int, hands: list[HandFrame]) -> PointerSample | None:
        eligible: dict[str, Point] = {}
        for hf in hands:
            if not hf.pointing(self._config.collinearity_tol_deg):
                continue
            try:
                raw = Point(*self._h.to_map_coords(*hf.tip))
            except CalibrationError:
                continue
            if not self._on_map(raw):
                continue
            eligible[hf.hand] = raw

        for hand, raw in eligible.items():
            window = self._windows.setdefault(hand, deque(maxlen=self._config.smoothing_window))
            window.append(raw)
        # A hand that stops pointing loses its history: when it next
        # points it starts a fresh window rather than dragging old motion
        # into the displacement comparison.
        for hand in list(self._windows):
            if hand not in eligible:
                del self._windows[hand]

        if not eligible:
            self._active = None
            return None

        if len(eligible) == 1:
            chosen = next(iter(eligible))
        else:
            def displacement(hand: str) -> float:
                w = self._windows[hand]
                return w[-1].dist(w[0])

            ranked = sorted(eligible, key=displacement, reverse=True)
            best, runner_up = ranked[0], ranked[1]
            if abs(displacement(best) - displacement(runner_up)) < 1e-12:
                if self._active in eligible:
                    chosen = self._active
                else:
                    chosen = min(eligible)
            else:
                chosen = best
        self._active = chosen

        window = self._windows[chosen]
        smoothed = Point(
            sum(p.x for p in window) / len(window),
            sum(p.y for p in window) / len(window),
        )
        return PointerSample(t_ms=t_ms, hand=chosen, raw=eligible[chosen], smoothed=smoothed)


# ---------------------------------------------------------------------------
# Feature gravity
# ---------------------------------------------------------------------------


class FeatureKind(str, Enum):
    NODE = "intersection_node"
    EDGE = "street_edge"
    POI = "poi"


# Capture preference when several features tie on distance.
_KIND_RANK = {FeatureKind.NODE: 0, FeatureKind.EDGE: 1, FeatureKind.POI: 2}


@dataclass(frozen=True)
class FeatureHit:
    kind: FeatureKind
    feature_id: str
    distance_m: float
    snapped: Point  # closest point on the feature


class SnapEngine:
    """Snaps a map position onto the nearest feature with hysteresis.

    A feature is captured when the pointer comes within the capture
    radius and only released once the pointer leaves the larger release
    radius, so the selection cannot oscillate at a boundary. POIs join
    the candidate set only when discoverable, either authored so or made
    so during the session.
    """

    def __init__(self, model: MapModel, config: EngineConfig) -> None:
        self._model = model
        self._config = config
        self.discoverable_pois: set[str] = set()
        self._held: FeatureHit | None = None

    @property
    def held(self) -> FeatureHit | None:
        return self._held

    def _poi_visible(self, poi_id: str) -> bool:
        return self._model.pois[poi_id].discoverable or poi_id in self.discoverable_pois

    def _measure(self, kind: FeatureKind, feature_id: str, pos: Point) -> FeatureHit:
        if kind is FeatureKind.NODE:
            target = self._model.nodes[feature_id].position
        elif kind is FeatureKind.POI:
            target = self._model.pois[feature_id].position
        else:
            a, b = self._model.edge_points(feature_id)
            target, _ = project_on_segment(pos, a, b)
        return FeatureHit(kind=kind, feature_id=feature_id, distance_m=pos.dist(target), snapped=target)

    def _candidates(self, pos: Point) -> list[FeatureHit]:
        hits = [self._measure(FeatureKind.NODE, nid, pos) for nid in self._model.nodes]
        hits += [self._measure(FeatureKind.EDGE, eid, pos) for eid in self._model.edges]
        hits += [
            self._measure(FeatureKind.POI, pid, pos)
            for pid in self._model.pois
            if self._poi_visible(pid)
        ]
        return hits

    def update(self, pos: Point | None) -> FeatureHit | None:
        if pos is None:
            self._held = None
            return None
        if self._held is not None:
            refreshed = self._measure(self._held.kind, self._held.feature_id, pos)
            if refreshed.distance_m <= self._config.release_radius_m:
                self._held = refreshed
                return refreshed
            self._held = None
        best: FeatureHit | None = None
        for hit in self._candidates(pos):
            if hit.distance_m > self._config.capture_radius_m:
                continue
            if best is None or (hit.distance_m, _KIND_RANK[hit.kind], hit.feature_id) < (
                best.distance_m,
                _KIND_RANK[best.kind],
                best.feature_id,
            ):
                best = hit
        self._held = best
        return best


# ---------------------------------------------------------------------------
# Speech feedback state machine
# ---------------------------------------------------------------------------


class PointerEventType(str, Enum):
    ENTER = "ENTER"
    LEAVE = "LEAVE"
    DWELL = "DWELL"
    AMBIENT_ON = "AMBIENT_ON"
    AMBIENT_OFF = "AMBIENT_OFF"


@dataclass(frozen=True)
class PointerEvent:
    type: PointerEventType
    t_ms: int
    kind: FeatureKind | None = None
    feature_id: str | None = None


@dataclass
class FeedbackMachine:
    """Turns pointer/feature occupancy into speech feedback events.

    Emits ENTER when the held feature changes (after a LEAVE for the one
    given up), DWELL once per visit after the dwell threshold, and the
    ambient soundscape toggles whenever a pointing hand disappears from
    or returns to the map.
    """

    config: EngineConfig
    _ambient_on: bool = False
    _held: FeatureHit | None = None
    _entered_t_ms: int = 0
    _dwelled: bool = field(default=False, repr=False)

    def update(self, t_ms: int, sample: PointerSample | None, hit: FeatureHit | None) -> list[PointerEvent]:
        events: list[PointerEvent] = []

        if sample is None and not self._ambient_on:
            self._ambient_on = True
            events.append(PointerEvent(PointerEventType.AMBIENT_ON, t_ms))
        elif sample is not None and self._ambient_on:
            self._ambient_on = False
            events.append(PointerEvent(PointerEventType.AMBIENT_OFF, t_ms))

        same = (
            hit is not None
            and self._held is not None
            and hit.kind is self._held.kind
            and hit.feature_id == self._held.feature_id
        )
        if not same:
            if self._held is not None:
                events.append(
                    PointerEvent(PointerEventType.LEAVE, t_ms, self._held.kind, self._held.feature_id)
                )
            if hit is not None:
                events.append(PointerEvent(PointerEventType.ENTER, t_ms, hit.kind, hit.feature_id))
                self._entered_t_ms = t_ms
                self._dwelled = False
            self._held = hit
        elif hit is not None and not self._dwelled:
            if t_ms - self._entered_t_ms >= self.config.dwell_threshold_s * 1000.0:
                self._dwelled = True
                events.append(PointerEvent(PointerEventType.DWELL, t_ms, hit.kind, hit.feature_id))
        return events


# ---------------------------------------------------------------------------
# Pointer trace files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Directive:
    """Non-camera replay input: push-to-talk, guidance and flow control."""

    t_ms: int
    command: str
    arg: str = ""


@dataclass(frozen=True)
class TraceStep:
    """All trace input sharing one timestamp: one camera frame + directives."""

    t_ms: int
    hands: tuple[HandFrame, ...]
    directives: tuple[Directive, ...]
    camera: bool = True  # False for directive-only steps (no camera frame)


def parse_trace(text: str) -> list[TraceStep]:
    """Parse a pointer trace file into time-ordered steps.

    Each record line is ``t_ms hand x y`` optionally followed by 40
    numbers (20 landmark pairs). ``hand`` is ``left``, ``right`` or
    ``none`` (an empty camera frame). Lines starting with ``#`` are
    comments, and ``t_ms ! command [arg]`` lines carry replay directives
    such as push-to-talk presses. Records sharing a timestamp form one
    step.
    """
    by_time: dict[int, tuple[list[HandFrame], list[Directive], list[bool]]] = {}
    order: list[int] = []
    last_t: int | None = None
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            t_ms = int(parts[0])
        except ValueError:
            raise ValueError(f"trace line {line_no}: timestamp {parts[0]!r} is not an integer") from None
        if last_t is not None and t_ms < last_t:
            raise ValueError(f"trace line {line_no}: timestamps must not decrease ({t_ms} after {last_t})")
        last_t = t_ms
        if t_ms not in by_time:
            by_time[t_ms] = ([], [], [])
            order.append(t_ms)
        hands, directives, camera_flag = by_time[t_ms]

        if len(parts) >= 2 and parts[1] == "!":
            if len(parts) < 3:
                raise ValueError(f"trace line {line_no}: directive needs a command")
            arg = line.split(None, 3)[3] if len(parts) > 3 else ""
            directives.append(Directive(t_ms=t_ms, command=parts[2], arg=arg))
            continue

        if len(parts) < 2:
            raise ValueError(f"trace line {line_no}: expected 't_ms hand x y'")
        hand = parts[1]
        camera_flag.append(True)
        if hand == "none":
            if len(parts) != 2:
                raise ValueError(f"trace line {line_no}: 'none' records carry no coordinates")
            continue  # registers the timestamp as an empty camera frame
        if hand not in ("left", "right"):
            raise ValueError(f"trace line {line_no}: unknown hand {hand!r}")
        numbers = parts[2:]
        if len(numbers) not in (2, 2 + 2 * LANDMARK_COUNT):
            raise ValueError(
                f"trace line {line_no}: expected 2 or {2 + 2 * LANDMARK_COUNT} numbers after the hand, "
                f"got {len(numbers)}"
            )
        try:
            values = [float(v) for v in numbers]
        except ValueError:
            raise ValueError(f"trace line {line_no}: coordinates must be numbers") from None
        landmarks = None
        if len(values) > 2:
            pts = values[2:]
            landmarks = tuple((pts[i], pts[i + 1]) for i in range(0, len(pts), 2))
        hands.append(HandFrame(t_ms=t_ms, hand=hand, tip=(values[0], values[1]), landmarks=landmarks))

    return [
        TraceStep(
            t_ms=t,
            hands=tuple(by_time[t][0]),
            directives=tuple(by_time[t][1]),
            camera=bool(by_time[t][2]),
        )
        for t in order
    ]
