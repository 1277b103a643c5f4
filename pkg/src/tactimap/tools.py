"""Spatial and action tools callable by the chat model.

The catalog grows with the instruction preset: pure spatial queries from
preset 6, touch-discoverability from preset 7, and guidance starters plus
bookmarks from preset 8. Dispatch resolves every place argument the same
way, so "here", POI names, intersection labels, bookmarks and raw
coordinates are interchangeable in any place-typed parameter.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable

from .config import EngineConfig
from .model import MapModel, Point, format_meters
from .spatial import (
    RouteNotFound,
    access_node,
    cardinal_of,
    closest_edge,
    intersection_type,
    is_near,
    pois_near,
    poi_node,
    route_instructions,
    shortest_route,
)


class ToolError(ValueError):
    """A tool call could not be honored (bad arguments, missing context)."""


@dataclass(frozen=True)
class ToolSpec:
    name: str
    description: str
    parameters: dict[str, Any]  # JSON schema for the arguments object


# Start guidance; returns the text of the first announcement (if any).
NavStarter = Callable[[Point, str, str, bool], str | None]
BeaconStarter = Callable[[Point, str], None]


@dataclass
class ToolContext:
    """Everything a tool call may read or act on during one chat turn."""

    model: MapModel
    config: EngineConfig
    position: Point | None = None  # pointing snapshot bound at push-to-talk
    now: datetime | None = None
    bookmarks: dict[str, Point] = field(default_factory=dict)
    discoverable: set[str] = field(default_factory=set)
    start_nav: NavStarter | None = None
    start_beacon: BeaconStarter | None = None


@dataclass(frozen=True)
class ResolvedPlace:
    point: Point
    node_id: str  # graph node standing in for the place when routing
    name: str
    poi_id: str | None = None


def resolve_place(ctx: ToolContext, value: Any) -> ResolvedPlace:
    """Turn a place argument into a position plus routing node.

    Accepts "here" (the pointing snapshot), a POI id, an intersection id,
    a bookmark name, a POI name or intersection label (case-insensitive),
    or a raw ``[x, y]`` pair in meters.
    """
    model = ctx.model
    if isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            p = Point(float(value[0]), float(value[1]))
        except (TypeError, ValueError):
            raise ToolError(f"coordinates must be numbers, got {value!r}") from None
        return ResolvedPlace(p, access_node(model, p), f"({format_meters(p.x)}, {format_meters(p.y)})")
    if not isinstance(value, str):
        raise ToolError(f"cannot interpret {value!r} as a place")
    text = value.strip()
    if text.lower() == "here":
        if ctx.position is None:
            raise ToolError("no pointing position is available for 'here'")
        p = ctx.position
        return ResolvedPlace(p, access_node(model, p), "your position")
    if text in model.pois:
        poi = model.pois[text]
        return ResolvedPlace(poi.position, poi_node(model, text), poi.name, poi_id=text)
    if text in model.nodes:
        return ResolvedPlace(model.nodes[text].position, text, model.node_label(text))
    folded = text.lower()
    if folded in {k.lower() for k in ctx.bookmarks}:
        for k, p in ctx.bookmarks.items():
            if k.lower() == folded:
                return ResolvedPlace(p, access_node(model, p), k)
    for pid in sorted(model.pois):
        if model.pois[pid].name.lower() == folded:
            poi = model.pois[pid]
            return ResolvedPlace(poi.position, poi_node(model, pid), poi.name, poi_id=pid)
    for nid in sorted(model.nodes):
        if model.nodes[nid].label.lower() == folded:
            return ResolvedPlace(model.nodes[nid].position, nid, model.node_label(nid))
    raise ToolError(f"unknown place {value!r}")


def _resolve_poi(ctx: ToolContext, value: Any) -> str:
    """POI id from an id or case-insensitive name."""
    if not isinstance(value, str):
        raise ToolError(f"cannot interpret {value!r} as a point of interest")
    text = value.strip()
    if text in ctx.model.pois:
        return text
    folded = text.lower()
    for pid in sorted(ctx.model.pois):
        if ctx.model.pois[pid].name.lower() == folded:
            return pid
    raise ToolError(f"unknown point of interest {value!r}")


_PLACE_SCHEMA: dict[str, Any] = {
    "description": (
        "A place: 'here' (current pointing position), a POI name or id, an "
        "intersection id or label, a bookmark name, or [x, y] in meters"
    ),
    "anyOf": [
        {"type": "string"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ],
}


def _schema(properties: dict[str, Any], required: list[str]) -> dict[str, Any]:
    return {"type": "object", "properties": properties, "required": required}


_SPATIAL_TOOLS = [
    ToolSpec(
        name="distance_between",
        description="Straight-line distance in meters between two places on the map.",
        parameters=_schema({"a": _PLACE_SCHEMA, "b": _PLACE_SCHEMA}, ["a", "b"]),
    ),
    ToolSpec(
        name="is_near_poi",
        description="Whether a place lies within a threshold distance of a point of interest.",
        parameters=_schema(
            {
                "place": _PLACE_SCHEMA,
                "poi": {"type": "string", "description": "POI name or id"},
                "threshold_m": {"type": "number", "description": "distance threshold in meters"},
            },
            ["place", "poi", "threshold_m"],
        ),
    ),
    ToolSpec(
        name="pois_near_point",
        description="Points of interest within a radius of a place, nearest first.",
        parameters=_schema(
            {
                "place": _PLACE_SCHEMA,
                "radius_m": {"type": "number", "description": "search radius in meters"},
            },
            ["place", "radius_m"],
        ),
    ),
    ToolSpec(
        name="closest_edge_at",
        description="The street segment closest to a place, with the distance to it.",
        parameters=_schema({"place": _PLACE_SCHEMA}, ["place"]),
    ),
    ToolSpec(
        name="intersection_type_of",
        description="Whether an intersection is a T, a 4-way, or another kind.",
        parameters=_schema(
            {"node": {"type": "string", "description": "intersection id or label"}}, ["node"]
        ),
    ),
    ToolSpec(
        name="cardinal_between",
        description="Compass direction (8 winds) from one place to another.",
        parameters=_schema({"a": _PLACE_SCHEMA, "b": _PLACE_SCHEMA}, ["a", "b"]),
    ),
    ToolSpec(
        name="route_between",
        description=(
            "Shortest walking route between two places: length, estimated time, "
            "and street-by-street instructions."
        ),
        parameters=_schema(
            {
                "from": _PLACE_SCHEMA,
                "to": _PLACE_SCHEMA,
                "accessible": {
                    "type": "boolean",
                    "description": "include paving, accessibility and crossing details",
                },
            },
            ["from", "to"],
        ),
    ),
]

_DISCOVER_TOOL = ToolSpec(
    name="make_poi_discoverable",
    description=(
        "Make a point of interest respond to the user's finger on the map, so "
        "they can find it by touch."
    ),
    parameters=_schema({"poi": {"type": "string", "description": "POI name or id"}}, ["poi"]),
)

_GUIDANCE_TOOLS = [
    ToolSpec(
        name="start_street_by_street",
        description=(
            "Start step-by-step walking guidance from the user's position to a "
            "destination. Use when the user asks to be navigated or asks for "
            "directions."
        ),
        parameters=_schema(
            {
                "destination": _PLACE_SCHEMA,
                "accessible": {
                    "type": "boolean",
                    "description": "read paving, accessibility and crossing details with each step",
                },
            },
            ["destination"],
        ),
    ),
    ToolSpec(
        name="start_fly_me_there",
        description=(
            "Start continuous homing guidance toward a destination: repeating "
            "distance-and-direction cues. Use when the user asks to be guided."
        ),
        parameters=_schema({"destination": _PLACE_SCHEMA}, ["destination"]),
    ),
    ToolSpec(
        name="remember_bookmark",
        description="Save the user's current pointing position under a name.",
        parameters=_schema({"name": {"type": "string", "description": "bookmark name"}}, ["name"]),
    ),
    ToolSpec(
        name="resolve_bookmark",
        description="Look up a previously saved bookmark by name.",
        parameters=_schema({"name": {"type": "string", "description": "bookmark name"}}, ["name"]),
    ),
]


def catalog(preset: int) -> list[ToolSpec]:
    """Tools available at an instruction preset (empty before preset 6)."""
    tools: list[ToolSpec] = []
    if preset >= 6:
        tools.extend(_SPATIAL_TOOLS)
    if preset >= 7:
        tools.append(_DISCOVER_TOOL)
    if preset >= 8:
        tools.extend(_GUIDANCE_TOOLS)
    return tools


def _require(arguments: dict[str, Any], *names: str) -> list[Any]:
    missing = [n for n in names if n not in arguments]
    if missing:
        raise ToolError(f"missing required argument(s): {', '.join(missing)}")
    return [arguments[n] for n in names]


def dispatch(ctx: ToolContext, name: str, arguments: dict[str, Any]) -> dict[str, Any]:
    """Run one tool call against the context; results are JSON-encodable."""
    model = ctx.model

    if name == "distance_between":
        a_raw, b_raw = _require(arguments, "a", "b")
        a, b = resolve_place(ctx, a_raw), resolve_place(ctx, b_raw)
        return {"from": a.name, "to": b.name, "meters": a.point.dist(b.point)}

    if name == "is_near_poi":
        place_raw, poi_raw, threshold = _require(arguments, "place", "poi", "threshold_m")
        place = resolve_place(ctx, place_raw)
        pid = _resolve_poi(ctx, poi_raw)
        d = place.point.dist(model.pois[pid].position)
        return {
            "place": place.name,
            "poi": model.pois[pid].name,
            "near": is_near(model, place.point, pid, float(threshold)),
            "meters": d,
        }

    if name == "pois_near_point":
        place_raw, radius = _require(arguments, "place", "radius_m")
        place = resolve_place(ctx, place_raw)
        found = pois_near(model, place.point, float(radius))
        return {
            "place": place.name,
            "pois": [
                {"id": poi.id, "name": poi.name, "category": poi.category, "meters": d}
                for poi, d in found
            ],
        }

    if name == "closest_edge_at":
        (place_raw,) = _require(arguments, "place")
        place = resolve_place(ctx, place_raw)
        proj = closest_edge(model, place.point)
        edge = model.edges[proj.edge_id]
        return {
            "place": place.name,
            "edge": proj.edge_id,
            "street": edge.street_name,
            "between": [model.node_label(edge.n1), model.node_label(edge.n2)],
            "meters": proj.distance_m,
        }

    if name == "intersection_type_of":
        (node_raw,) = _require(arguments, "node")
        if not isinstance(node_raw, str):
            raise ToolError(f"{node_raw!r} is not an intersection")
        nid = node_raw.strip()
        if nid not in model.nodes:
            matches = [n for n in sorted(model.nodes) if model.nodes[n].label.lower() == nid.lower()]
            if not matches:
                raise ToolError(f"unknown intersection {node_raw!r}")
            nid = matches[0]
        return {
            "node": nid,
            "label": model.node_label(nid),
            "type": intersection_type(model, nid).value,
        }

    if name == "cardinal_between":
        a_raw, b_raw = _require(arguments, "a", "b")
        a, b = resolve_place(ctx, a_raw), resolve_place(ctx, b_raw)
        return {"from": a.name, "to": b.name, "direction": cardinal_of(a.point, b.point)}

    if name == "route_between":
        from_raw, to_raw = _require(arguments, "from", "to")
        a, b = resolve_place(ctx, from_raw), resolve_place(ctx, to_raw)
        try:
            route = shortest_route(model, a.node_id, b.node_id)
        except RouteNotFound as exc:
            raise ToolError(str(exc)) from None
        steps = route_instructions(model, route, accessible=bool(arguments.get("accessible", False)))
        return {
            "from": a.name,
            "to": b.name,
            "length_m": route.length_m,
            "walking_time_s": route.length_m / ctx.config.walking_speed_mps,
            "instructions": [s.text for s in steps],
        }

    if name == "make_poi_discoverable":
        (poi_raw,) = _require(arguments, "poi")
        pid = _resolve_poi(ctx, poi_raw)
        ctx.discoverable.add(pid)
        return {"poi_id": pid, "name": model.pois[pid].name, "discoverable": True}

    if name == "remember_bookmark":
        (bm_name,) = _require(arguments, "name")
        if not isinstance(bm_name, str) or not bm_name.strip():
            raise ToolError("bookmark name must be a non-empty string")
        if ctx.position is None:
            raise ToolError("no pointing position to bookmark")
        ctx.bookmarks[bm_name.strip()] = ctx.position
        return {"name": bm_name.strip(), "position": ctx.position.as_list()}

    if name == "resolve_bookmark":
        (bm_name,) = _require(arguments, "name")
        place = resolve_place(ctx, bm_name)
        return {"name": place.name, "position": place.point.as_list()}

    if name == "start_street_by_street":
        (dest_raw,) = _require(arguments, "destination")
        dest = resolve_place(ctx, dest_raw)
        if ctx.position is None:
            raise ToolError("no current position to start guidance from")
        if ctx.start_nav is None:
            raise ToolError("guidance is not available in this session")
        first_step = ctx.start_nav(
            ctx.position, dest.node_id, dest.name, bool(arguments.get("accessible", False))
        )
        return {"started": True, "mode": "street_by_street", "destination": dest.name, "first_step": first_step}

    if name == "start_fly_me_there":
        (dest_raw,) = _require(arguments, "destination")
        dest = resolve_place(ctx, dest_raw)
        if ctx.start_beacon is None:
            raise ToolError("guidance is not available in this session")
        ctx.start_beacon(dest.point, dest.name)
        return {"started": True, "mode": "fly_me_there", "destination": dest.name}

    raise ToolError(f"unknown tool {name!r}")
