"""Annotated road-graph map model: loading, validation, and serialization.

A map document is UTF-8 JSON with top-level keys ``version``, ``frame``,
``nodes``, ``edges``, ``pois`` and ``area_description``. Ids are strings,
positions are ``[x_m, y_m]`` in the map's local metric frame (east = +x,
north = +y). Geodetic corner coordinates are carried as metadata only;
all computation happens in the local frame.

Opening hours are encoded per weekday ("mon".."sun") as closed minute
intervals ``[start, end]`` with ``0 <= start < end <= 1439``; spans past
midnight are split at 00:00 into two intervals.
"""
from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, BinaryIO, TextIO

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
WEEKDAYS = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")
CARDINAL_KEYS = ("north", "east", "south", "west")

STRUCTURE_EXPLANATION = (
    "The document above describes a street map. Each entry in \"nodes\" is a "
    "street intersection, with an id and a position in meters within the map's "
    "local reference system (x grows toward east, y grows toward north, and "
    "distances between positions match real-world distances). Each entry in "
    "\"edges\" is a street segment that joins the two intersections listed in "
    "\"endpoints\" and belongs to the street named in \"street_name\". Entries "
    "in \"pois\" are points of interest, each with its position, address, "
    "closest street segment, opening hours, facilities and accessibility notes."
)


class MapValidationError(ValueError):
    """A map document violates the schema or a model invariant."""


class IntersectionKind(str, Enum):
    T = "T"
    FOUR_WAY = "4-way"
    OTHER = "other"


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_list(self) -> list[float]:
        return [self.x, self.y]


@dataclass(frozen=True)
class ReferenceFrame:
    map_name: str
    corner_geocoords: tuple[tuple[float, float], ...]  # 4 x (lat, lon): NW, NE, SE, SW
    width_m: float
    height_m: float
    scale_text: str
    surroundings: tuple[tuple[str, str], ...] = ()  # (cardinal, text) pairs

    def surroundings_map(self) -> dict[str, str]:
        return dict(self.surroundings)


@dataclass(frozen=True)
class Crossing:
    street: str
    crosswalk: bool = False
    traffic_light: bool = False
    audio_signal: bool = False


@dataclass(frozen=True)
class Node:
    id: str
    position: Point
    label: str = ""
    intersection_type: IntersectionKind | None = None  # None = derive from degree
    crossings: tuple[Crossing, ...] = ()


@dataclass(frozen=True)
class Edge:
    id: str
    n1: str
    n2: str
    street_name: str
    paving: str = ""
    slope: float | None = None  # signed grade in percent, uphill n1 -> n2
    one_way: tuple[str, str] | None = None  # (from node, to node)
    accessibility: tuple[str, ...] = ()


# day -> ((start_minute, end_minute), ...)
OpeningHours = tuple[tuple[str, tuple[tuple[int, int], ...]], ...]


@dataclass(frozen=True)
class Poi:
    id: str
    name: str
    category: str
    position: Point
    address: str = ""
    closest_edge: tuple[str, float] | None = None  # (edge id, meters from n1)
    opening_hours: OpeningHours = ()
    facilities: tuple[str, ...] = ()
    accessibility: tuple[str, ...] = ()
    description: str = ""
    discoverable: bool = False

    def hours_map(self) -> dict[str, tuple[tuple[int, int], ...]]:
        return dict(self.opening_hours)


@dataclass
class MapModel:
    frame: ReferenceFrame
    nodes: dict[str, Node]
    edges: dict[str, Edge]
    pois: dict[str, Poi]
    area_description: str = ""
    _lengths: dict[str, float] = field(default_factory=dict, compare=False, repr=False)
    _incident: dict[str, list[str]] = field(default_factory=dict, compare=False, repr=False)

    # -- derived graph data ------------------------------------------------

    def edge_length(self, edge_id: str) -> float:
        return self._lengths[edge_id]

    def node_degree(self, node_id: str) -> int:
        return len(self._incident[node_id])

    def incident_edges(self, node_id: str) -> list[str]:
        return list(self._incident[node_id])

    def edge_points(self, edge_id: str) -> tuple[Point, Point]:
        e = self.edges[edge_id]
        return self.nodes[e.n1].position, self.nodes[e.n2].position

    def intersection_kind(self, node_id: str) -> IntersectionKind:
        """Authored intersection type, or the degree-derived default."""
        node = self.nodes[node_id]
        if node.intersection_type is not None:
            return node.intersection_type
        degree = self.node_degree(node_id)
        if degree == 3:
            return IntersectionKind.T
        if degree == 4:
            return IntersectionKind.FOUR_WAY
        return IntersectionKind.OTHER

    def node_label(self, node_id: str) -> str:
        node = self.nodes[node_id]
        return node.label or node.id

    def finalize(self) -> "MapModel":
        """Populate derived edge lengths and node incidence. Idempotent."""
        self._lengths = {}
        self._incident = {nid: [] for nid in self.nodes}
        for eid, e in self.edges.items():
            p1, p2 = self.nodes[e.n1].position, self.nodes[e.n2].position
            self._lengths[eid] = p1.dist(p2)
            self._incident[e.n1].append(eid)
            self._incident[e.n2].append(eid)
        return self


def is_open(poi: Poi, weekday: int, minute: int) -> bool:
    """Whether the POI is open on ``weekday`` (0 = Monday) at ``minute`` of day."""
    intervals = poi.hours_map().get(WEEKDAYS[weekday], ())
    return any(start <= minute <= end for start, end in intervals)


def opening_hours_text(poi: Poi) -> str:
    if not poi.opening_hours:
        return "opening hours unknown"
    parts = []
    for day, intervals in poi.opening_hours:
        spans = ", ".join(f"{s // 60:02d}:{s % 60:02d}-{e // 60:02d}:{e % 60:02d}" for s, e in intervals)
        parts.append(f"{day} {spans}")
    return "; ".join(parts)


def format_meters(value: float) -> str:
    """Render a length in meters: integers without decimals, else 1 decimal."""
    if abs(value - round(value)) < 5e-7:
        return str(int(round(value)))
    return f"{value:.1f}"


# ---------------------------------------------------------------------------
# Document parsing
# ---------------------------------------------------------------------------


def _err(path: str, message: str) -> MapValidationError:
    return MapValidationError(f"{path}: {message}")


def _expect(doc: Any, path: str, kind: type, what: str) -> Any:
    if not isinstance(doc, kind):
        raise _err(path, f"expected {what}")
    return doc


def _parse_point(raw: Any, path: str) -> Point:
    if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
        raise _err(path, "expected a position [x_m, y_m]")
    x, y = raw
    if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in (x, y)):
        raise _err(path, "position coordinates must be finite numbers")
    return Point(float(x), float(y))


def _parse_str_list(raw: Any, path: str) -> tuple[str, ...]:
    if raw is None:
        return ()
    _expect(raw, path, list, "a list of strings")
    out = []
    for i, item in enumerate(raw):
        _expect(item, f"{path}[{i}]", str, "a string")
        out.append(item)
    return tuple(out)


def _parse_frame(raw: Any) -> ReferenceFrame:
    _expect(raw, "frame", dict, "an object")
    corners_raw = _expect(raw.get("corner_geocoords"), "frame.corner_geocoords", list, "a list")
    if len(corners_raw) != 4:
        raise _err("frame.corner_geocoords", "exactly 4 corners required")
    corners = []
    for i, c in enumerate(corners_raw):
        if not (isinstance(c, (list, tuple)) and len(c) == 2):
            raise _err(f"frame.corner_geocoords[{i}]", "expected [lat, lon]")
        corners.append((float(c[0]), float(c[1])))
    width = raw.get("width_m")
    height = raw.get("height_m")
    for key, value in (("width_m", width), ("height_m", height)):
        if not (isinstance(value, (int, float)) and value > 0):
            raise _err(f"frame.{key}", "must be a positive number")
    scale = raw.get("scale_text")
    if not (isinstance(scale, str) and scale.strip()):
        raise _err("frame.scale_text", "must be a non-empty string")
    surroundings_raw = raw.get("surroundings") or {}
    _expect(surroundings_raw, "frame.surroundings", dict, "an object")
    surroundings = []
    for key in CARDINAL_KEYS:
        if key in surroundings_raw:
            surroundings.append((key, _expect(surroundings_raw[key], f"frame.surroundings.{key}", str, "a string")))
    for key in surroundings_raw:
        if key not in CARDINAL_KEYS:
            raise _err(f"frame.surroundings.{key}", f"unknown cardinal (use one of {', '.join(CARDINAL_KEYS)})")
    return ReferenceFrame(
        map_name=_expect(raw.get("map_name", ""), "frame.map_name", str, "a string"),
        corner_geocoords=tuple(corners),
        width_m=float(width),
        height_m=float(height),
        scale_text=scale,
        surroundings=tuple(surroundings),
    )


def _parse_node(raw: Any, path: str) -> Node:
    _expect(raw, path, dict, "an object")
    nid = _expect(raw.get("id"), f"{path}.id", str, "a string id")
    kind_raw = raw.get("intersection_type")
    kind = None
    if kind_raw is not None:
        try:
            kind = IntersectionKind(kind_raw)
        except ValueError:
            raise _err(f"{path}.intersection_type", f"unknown value {kind_raw!r}") from None
    crossings = []
    for i, c in enumerate(raw.get("crossings") or []):
        cpath = f"{path}.crossings[{i}]"
        _expect(c, cpath, dict, "an object")
        crossings.append(
            Crossing(
                street=_expect(c.get("street"), f"{cpath}.street", str, "a street name"),
                crosswalk=bool(c.get("crosswalk", False)),
                traffic_light=bool(c.get("traffic_light", False)),
                audio_signal=bool(c.get("audio_signal", False)),
            )
        )
    return Node(
        id=nid,
        position=_parse_point(raw.get("position"), f"{path}.position"),
        label=_expect(raw.get("label", ""), f"{path}.label", str, "a string"),
        intersection_type=kind,
        crossings=tuple(crossings),
    )


def _parse_edge(raw: Any, path: str) -> Edge:
    _expect(raw, path, dict, "an object")
    eid = _expect(raw.get("id"), f"{path}.id", str, "a string id")
    endpoints = raw.get("endpoints")
    if not (isinstance(endpoints, list) and len(endpoints) == 2 and all(isinstance(n, str) for n in endpoints)):
        raise _err(f"{path}.endpoints", "expected [node_id, node_id]")
    slope = raw.get("slope")
    if slope is not None and not isinstance(slope, (int, float)):
        raise _err(f"{path}.slope", "must be a number")
    one_way = raw.get("one_way")
    if one_way is not None:
        if not (isinstance(one_way, list) and len(one_way) == 2 and all(isinstance(n, str) for n in one_way)):
            raise _err(f"{path}.one_way", "expected [from_node, to_node]")
        if set(one_way) != set(endpoints):
            raise _err(f"{path}.one_way", "must reference the edge endpoints")
        one_way = (one_way[0], one_way[1])
    return Edge(
        id=eid,
        n1=endpoints[0],
        n2=endpoints[1],
        street_name=_expect(raw.get("street_name"), f"{path}.street_name", str, "a street name"),
        paving=_expect(raw.get("paving", ""), f"{path}.paving", str, "a string"),
        slope=None if slope is None else float(slope),
        one_way=one_way,
        accessibility=_parse_str_list(raw.get("accessibility"), f"{path}.accessibility"),
    )


def _parse_hours(raw: Any, path: str) -> OpeningHours:
    if raw is None:
        return ()
    _expect(raw, path, dict, "an object keyed by weekday")
    out = []
    for day, intervals in raw.items():
        if day not in WEEKDAYS:
            raise _err(f"{path}.{day}", f"unknown weekday (use one of {', '.join(WEEKDAYS)})")
        _expect(intervals, f"{path}.{day}", list, "a list of [start, end] minute pairs")
        parsed = []
        for i, iv in enumerate(intervals):
            if not (isinstance(iv, list) and len(iv) == 2 and all(isinstance(v, int) for v in iv)):
                raise _err(f"{path}.{day}[{i}]", "expected [start_minute, end_minute]")
            start, end = iv
            if not (0 <= start < end <= 1439):
                raise _err(f"{path}.{day}[{i}]", "minutes must satisfy 0 <= start < end <= 1439")
            parsed.append((start, end))
        out.append((day, tuple(parsed)))
    out.sort(key=lambda item: WEEKDAYS.index(item[0]))
    return tuple(out)


def _parse_poi(raw: Any, path: str) -> Poi:
    _expect(raw, path, dict, "an object")
    pid = _expect(raw.get("id"), f"{path}.id", str, "a string id")
    closest = raw.get("closest_edge")
    if closest is not None:
        _expect(closest, f"{path}.closest_edge", dict, "an object")
        edge_id = _expect(closest.get("edge"), f"{path}.closest_edge.edge", str, "an edge id")
        offset = closest.get("offset_m")
        if not isinstance(offset, (int, float)):
            raise _err(f"{path}.closest_edge.offset_m", "must be a number")
        closest = (edge_id, float(offset))
    return Poi(
        id=pid,
        name=_expect(raw.get("name"), f"{path}.name", str, "a name"),
        category=_expect(raw.get("category", ""), f"{path}.category", str, "a string"),
        position=_parse_point(raw.get("position"), f"{path}.position"),
        address=_expect(raw.get("address", ""), f"{path}.address", str, "a string"),
        closest_edge=closest,
        opening_hours=_parse_hours(raw.get("opening_hours"), f"{path}.opening_hours"),
        facilities=_parse_str_list(raw.get("facilities"), f"{path}.facilities"),
        accessibility=_parse_str_list(raw.get("accessibility"), f"{path}.accessibility"),
        description=_expect(raw.get("description", ""), f"{path}.description", str, "a string"),
        discoverable=bool(raw.get("discoverable", False)),
    )


def project_on_segment(p: Point, a: Point, b: Point) -> tuple[Point, float]:
    """Closest point to ``p`` on segment a-b and its arc offset from ``a``."""
    ax, ay, bx, by = a.x, a.y, b.x, b.y
    dx, dy = bx - ax, by - ay
    seg_len_sq = dx * dx + dy * dy
    if seg_len_sq == 0.0:
        return a, 0.0
    t = ((p.x - ax) * dx + (p.y - ay) * dy) / seg_len_sq
    t = min(1.0, max(0.0, t))
    proj = Point(ax + t * dx, ay + t * dy)
    return proj, t * math.sqrt(seg_len_sq)


def _validate(model: MapModel) -> None:
    bounds_slack = 1e-6
    w, h = model.frame.width_m, model.frame.height_m

    for nid, node in model.nodes.items():
        p = node.position
        if not (-bounds_slack <= p.x <= w + bounds_slack and -bounds_slack <= p.y <= h + bounds_slack):
            raise _err(f"nodes.{nid}.position", f"({p.x}, {p.y}) lies outside the {w} x {h} m frame")

    seen_pairs: set[tuple[str, str, str]] = set()
    for eid, e in model.edges.items():
        for endpoint in (e.n1, e.n2):
            if endpoint not in model.nodes:
                raise _err(f"edges.{eid}", f"endpoint {endpoint!r} does not exist")
        if e.n1 == e.n2:
            raise _err(f"edges.{eid}", "endpoints must differ")
        pair = (*sorted((e.n1, e.n2)), e.street_name)
        if pair in seen_pairs:
            raise _err(f"edges.{eid}", f"duplicate edge between {e.n1} and {e.n2} on {e.street_name!r}")
        seen_pairs.add(pair)

    model.finalize()

    for nid, node in model.nodes.items():
        degree = model.node_degree(nid)
        if node.intersection_type is IntersectionKind.T and degree != 3:
            raise _err(f"nodes.{nid}", f"authored as a T intersection but has degree {degree}")
        if node.intersection_type is IntersectionKind.FOUR_WAY and degree != 4:
            raise _err(f"nodes.{nid}", f"authored as a 4-way intersection but has degree {degree}")

    for pid, poi in model.pois.items():
        p = poi.position
        if not (-bounds_slack <= p.x <= w + bounds_slack and -bounds_slack <= p.y <= h + bounds_slack):
            raise _err(f"pois.{pid}.position", f"({p.x}, {p.y}) lies outside the {w} x {h} m frame")
        if poi.closest_edge is not None:
            edge_id, offset = poi.closest_edge
            if edge_id not in model.edges:
                raise _err(f"pois.{pid}.closest_edge", f"edge {edge_id!r} does not exist")
            a, b = model.edge_points(edge_id)
            proj, derived_offset = project_on_segment(poi.position, a, b)
            best = min(
                poi.position.dist(project_on_segment(poi.position, *model.edge_points(other))[0])
                for other in model.edges
            )
            if poi.position.dist(proj) > best + 1e-6:
                raise _err(f"pois.{pid}.closest_edge", f"edge {edge_id!r} is not a closest edge to the POI")
            if abs(offset - derived_offset) > 1e-3:
                raise _err(
                    f"pois.{pid}.closest_edge",
                    f"offset {offset} m disagrees with the geometric offset {derived_offset:.3f} m",
                )

    if model.nodes and not _is_connected(model):
        log.warning("map %r: road graph is not connected", model.frame.map_name)


def _is_connected(model: MapModel) -> bool:
    start = next(iter(model.nodes))
    seen = {start}
    stack = [start]
    while stack:
        nid = stack.pop()
        for eid in model.incident_edges(nid):
            e = model.edges[eid]
            other = e.n2 if e.n1 == nid else e.n1
            if other not in seen:
                seen.add(other)
                stack.append(other)
    return len(seen) == len(model.nodes)


def _derive_closest_edges(model: MapModel) -> None:
    for pid, poi in model.pois.items():
        if poi.closest_edge is None and model.edges:
            best: tuple[float, str, float] | None = None
            for eid in sorted(model.edges):
                a, b = model.edge_points(eid)
                proj, offset = project_on_segment(poi.position, a, b)
                d = poi.position.dist(proj)
                if best is None or d < best[0] - 1e-12:
                    best = (d, eid, offset)
            assert best is not None
            model.pois[pid] = dataclasses.replace(poi, closest_edge=(best[1], best[2]))


def load_map(source: bytes | str | TextIO | BinaryIO) -> MapModel:
    """Parse and validate a map document into a fully derived MapModel.

    Accepts raw bytes, text, or a readable stream. Trailing non-JSON text
    after the document (such as the structure explanation emitted by
    :func:`serialize_graph_structured`) is ignored.
    """
    if hasattr(source, "read"):
        source = source.read()  # type: ignore[union-attr]
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc, _ = json.JSONDecoder().raw_decode(source.lstrip())
    except json.JSONDecodeError as exc:
        raise MapValidationError(f"document is not valid JSON: {exc}") from exc
    _expect(doc, "document", dict, "a JSON object")

    version = doc.get("version")
    if version != SCHEMA_VERSION:
        raise _err("version", f"unsupported schema version {version!r} (expected {SCHEMA_VERSION})")

    nodes: dict[str, Node] = {}
    for i, raw in enumerate(_expect(doc.get("nodes"), "nodes", list, "a list")):
        node = _parse_node(raw, f"nodes[{i}]")
        if node.id in nodes:
            raise _err(f"nodes[{i}]", f"duplicate node id {node.id!r}")
        nodes[node.id] = node

    edges: dict[str, Edge] = {}
    for i, raw in enumerate(_expect(doc.get("edges"), "edges", list, "a list")):
        edge = _parse_edge(raw, f"edges[{i}]")
        if edge.id in edges:
            raise _err(f"edges[{i}]", f"duplicate edge id {edge.id!r}")
        edges[edge.id] = edge

    pois: dict[str, Poi] = {}
    for i, raw in enumerate(_expect(doc.get("pois", []), "pois", list, "a list")):
        poi = _parse_poi(raw, f"pois[{i}]")
        if poi.id in pois:
            raise _err(f"pois[{i}]", f"duplicate POI id {poi.id!r}")
        pois[poi.id] = poi

    model = MapModel(
        frame=_parse_frame(doc.get("frame")),
        nodes=nodes,
        edges=edges,
        pois=pois,
        area_description=_expect(doc.get("area_description", ""), "area_description", str, "a string"),
    )
    _validate(model)  # finalizes once the endpoints are known to exist
    _derive_closest_edges(model)
    return model


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def to_document(model: MapModel) -> dict[str, Any]:
    """Map document dict, inverse of :func:`load_map` (stable key order)."""
    frame = model.frame
    doc: dict[str, Any] = {
        "version": SCHEMA_VERSION,
        "frame": {
            "map_name": frame.map_name,
            "corner_geocoords": [list(c) for c in frame.corner_geocoords],
            "width_m": frame.width_m,
            "height_m": frame.height_m,
            "scale_text": frame.scale_text,
            "surroundings": {k: v for k, v in frame.surroundings},
        },
        "nodes": [],
        "edges": [],
        "pois": [],
        "area_description": model.area_description,
    }
    for node in model.nodes.values():
        raw: dict[str, Any] = {"id": node.id, "position": node.position.as_list()}
        if node.label:
            raw["label"] = node.label
        if node.intersection_type is not None:
            raw["intersection_type"] = node.intersection_type.value
        if node.crossings:
            raw["crossings"] = [
                {
                    "street": c.street,
                    "crosswalk": c.crosswalk,
                    "traffic_light": c.traffic_light,
                    "audio_signal": c.audio_signal,
                }
                for c in node.crossings
            ]
        doc["nodes"].append(raw)
    for edge in model.edges.values():
        raw = {"id": edge.id, "endpoints": [edge.n1, edge.n2], "street_name": edge.street_name}
        if edge.paving:
            raw["paving"] = edge.paving
        if edge.slope is not None:
            raw["slope"] = edge.slope
        if edge.one_way is not None:
            raw["one_way"] = list(edge.one_way)
        if edge.accessibility:
            raw["accessibility"] = list(edge.accessibility)
        doc["edges"].append(raw)
    for poi in model.pois.values():
        raw = {"id": poi.id, "name": poi.name, "position": poi.position.as_list()}
        if poi.category:
            raw["category"] = poi.category
        if poi.address:
            raw["address"] = poi.address
        if poi.closest_edge is not None:
            raw["closest_edge"] = {"edge": poi.closest_edge[0], "offset_m": poi.closest_edge[1]}
        if poi.opening_hours:
            raw["opening_hours"] = {day: [list(iv) for iv in intervals] for day, intervals in poi.opening_hours}
        if poi.facilities:
            raw["facilities"] = list(poi.facilities)
        if poi.accessibility:
            raw["accessibility"] = list(poi.accessibility)
        if poi.description:
            raw["description"] = poi.description
        if poi.discoverable:
            raw["discoverable"] = True
        doc["pois"].append(raw)
    return doc


def serialize_graph_structured(model: MapModel) -> str:
    """Full structured rendering of the model plus a structure explanation.

    The JSON half round-trips through :func:`load_map`; the trailing
    paragraph tells a language model how to read it.
    """
    return json.dumps(to_document(model), indent=2) + "\n\n" + STRUCTURE_EXPLANATION + "\n"


def serialize_graph_text(model: MapModel, include_intersection_types: bool = True) -> str:
    """Prose-like road graph listing, deterministic and ordered by id."""
    lines = ["Street segments:"]
    for eid in sorted(model.edges):
        e = model.edges[eid]
        sentence = (
            f"Edge {e.n1} - {e.n2} is part of {e.street_name}, between "
            f"{model.node_label(e.n1)} and {model.node_label(e.n2)}. "
            f"It is {format_meters(model.edge_length(eid))} m long."
        )
        if e.paving:
            sentence += f" Paving: {e.paving}."
        if e.slope is not None:
            sentence += f" Slope: {format_meters(abs(e.slope))}% {'uphill' if e.slope >= 0 else 'downhill'} from {e.n1} to {e.n2}."
        if e.one_way is not None:
            sentence += f" One-way street, from {e.one_way[0]} to {e.one_way[1]}."
        if e.accessibility:
            sentence += f" Accessibility: {'; '.join(e.accessibility)}."
        lines.append(sentence)
    lines.append("")
    lines.append("Intersections:")
    for nid in sorted(model.nodes):
        node = model.nodes[nid]
        sentence = f"Node {nid} ({model.node_label(nid)})"
        if include_intersection_types:
            sentence += f" is a {model.intersection_kind(nid).value} intersection"
        sentence += f" joining {model.node_degree(nid)} street segments."
        for c in node.crossings:
            feats = [name for name, on in (("crosswalk", c.crosswalk), ("traffic light", c.traffic_light), ("audio signal", c.audio_signal)) if on]
            sentence += f" Crossing over {c.street}: {', '.join(feats) if feats else 'no aids'}."
        lines.append(sentence)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PoiPositionFormats:
    local: Point
    address: str
    edge_ref: str


def poi_position_formats(poi: Poi, model: MapModel) -> PoiPositionFormats:
    """The three redundant position renderings of a POI.

    ``edge_ref`` names the closest street segment and both bounding
    intersections, with the arc offsets from each.
    """
    assert poi.closest_edge is not None, "load_map derives closest_edge"
    edge_id, offset = poi.closest_edge
    e = model.edges[edge_id]
    remainder = model.edge_length(edge_id) - offset
    edge_ref = (
        f"on edge {e.n1} - {e.n2}, part of {e.street_name}, "
        f"{format_meters(offset)} m from {model.node_label(e.n1)} and "
        f"{format_meters(remainder)} m from {model.node_label(e.n2)}"
    )
    return PoiPositionFormats(local=poi.position, address=poi.address, edge_ref=edge_ref)


# ---------------------------------------------------------------------------
# Spoken descriptions of map features
# ---------------------------------------------------------------------------


def feature_announcement(model: MapModel, kind: str, feature_id: str) -> str:
    """Short name read aloud when the pointer enters a feature."""
    if kind == "street_edge":
        return model.edges[feature_id].street_name
    if kind == "intersection_node":
        return model.node_label(feature_id)
    if kind == "poi":
        return model.pois[feature_id].name
    raise ValueError(f"unknown feature kind {kind!r}")


def feature_details(model: MapModel, kind: str, feature_id: str) -> str:
    """Accessibility and attribute details, read after a dwell on the feature."""
    if kind == "street_edge":
        e = model.edges[feature_id]
        parts = [e.street_name]
        if e.paving:
            parts.append(f"paving {e.paving}")
        if e.slope is not None:
            parts.append(f"slope {format_meters(abs(e.slope))}% {'uphill' if e.slope >= 0 else 'downhill'} toward {model.node_label(e.n2)}")
        if e.one_way is not None:
            parts.append(f"one-way toward {model.node_label(e.one_way[1])}")
        if e.accessibility:
            parts.append("accessibility: " + "; ".join(e.accessibility))
        return ". ".join(parts) + "."
    if kind == "intersection_node":
        node = model.nodes[feature_id]
        parts = [f"{model.node_label(feature_id)}, a {model.intersection_kind(feature_id).value} intersection"]
        for c in node.crossings:
            feats = [name for name, on in (("crosswalk", c.crosswalk), ("traffic light", c.traffic_light), ("audio signal", c.audio_signal)) if on]
            parts.append(f"crossing over {c.street}: {', '.join(feats) if feats else 'no aids'}")
        return ". ".join(parts) + "."
    if kind == "poi":
        poi = model.pois[feature_id]
        parts = [f"{poi.name}" + (f", {poi.category}" if poi.category else "")]
        parts.append(f"open {opening_hours_text(poi)}")
        if poi.facilities:
            parts.append("facilities: " + ", ".join(poi.facilities))
        if poi.accessibility:
            parts.append("accessibility: " + "; ".join(poi.accessibility))
        return ". ".join(parts) + "."
    raise ValueError(f"unknown feature kind {kind!r}")
