"""System instructions and pointing-context text for the chat engine.

The engine grew through eight graded instruction presets, each adding
context or policy on top of the previous one: from a bare persona with an
area description up to full road-graph text, spatial tools, and guidance
tool policies. Preset numbers are part of the public surface (CLI flag
``--preset``), so their content is frozen here in one place.

The pointing context is a short first-person paragraph describing where
the user's finger is on the map right now. It rides in front of every
transcribed question, separated by a fixed marker line, so the model
always knows the position the question was asked from.
"""
from __future__ import annotations

from datetime import datetime

from .model import (
    MapModel,
    Point,
    ReferenceFrame,
    format_meters,
    opening_hours_text,
    poi_position_formats,
    serialize_graph_structured,
    serialize_graph_text,
)
from .spatial import closest_edge

PRESET_RANGE = range(1, 9)

PROMPT_SEPARATOR = "\n---\n"

PERSONA = (
    "You are a helpful assistant supporting a blind person who is exploring a "
    "tactile street map by touch. Answer spoken questions about the map. Keep a "
    "friendly, conversational tone. When a question is ambiguous, ask a short "
    "clarifying question instead of guessing. Give answers that are detailed yet "
    "concise: lead with the direct answer, then add only the details that matter."
)

GROUNDING = (
    "Stick to the information provided here and in the conversation. If it is "
    "not sufficient to answer, say that you do not know and suggest how the "
    "user could find out."
)

LOCAL_FRAME = (
    "Positions are given in the map's local reference system, in meters. The "
    "origin is the southwest corner of the map; x grows toward east and y "
    "grows toward north. Distances between positions are real-world distances."
)

TOOLS_DIRECTIVE = (
    "You can call spatial query tools to measure distances, find nearby "
    "places, and compute routes on the map. When a question involves a "
    "distance, a travel time, a route, or what is nearby, call a tool instead "
    "of estimating, and base your answer on the tool result."
)

DISCOVERABLE_DIRECTIVE = (
    "If the user wants to find a place by touch, call make_poi_discoverable "
    "for it, so the place announces itself when their finger reaches it, and "
    "tell them it is now findable on the map."
)

FIRST_STEP_DIRECTIVE = (
    "When the user asks for directions, give only the first step of the "
    "route, then offer to continue. Do not read out a whole turn-by-turn "
    "list unless the user explicitly asks for the full route."
)

INTENT_EXAMPLES = (
    "Starting guidance:\n"
    "- \"guide me to the pharmacy\" asks for continuous homing guidance: call "
    "start_fly_me_there.\n"
    "- \"navigate me to the pharmacy\" or \"give me directions to the "
    "pharmacy\" asks for step-by-step walking directions: call "
    "start_street_by_street.\n"
    "- If the phrasing leaves the kind of guidance unclear, ask which one the "
    "user wants before starting."
)

BOOKMARK_DIRECTIVE = (
    "The user may name positions, as in \"remember this spot as home\". Call "
    "remember_bookmark to save the position they are pointing at under that "
    "name, and resolve_bookmark to turn a saved name back into a position."
)


def geo_position(frame: ReferenceFrame, p: Point) -> tuple[float, float]:
    """Geodetic (lat, lon) for a local point, bilinear over the corners."""
    nw, ne, se, sw = frame.corner_geocoords
    u = p.x / frame.width_m
    v = p.y / frame.height_m
    lat = (1 - v) * ((1 - u) * sw[0] + u * se[0]) + v * ((1 - u) * nw[0] + u * ne[0])
    lon = (1 - v) * ((1 - u) * sw[1] + u * se[1]) + v * ((1 - u) * nw[1] + u * ne[1])
    return lat, lon


def position_description(model: MapModel, pos: Point, include_intersection_type: bool = False) -> str:
    """First-person sentences locating a map position on the road network.

    Names the closest street segment, both bounding intersections, and the
    distance to each (nearest one first).
    """
    proj = closest_edge(model, pos)
    edge = model.edges[proj.edge_id]
    d1 = proj.offset_m
    d2 = model.edge_length(proj.edge_id) - proj.offset_m
    ends = [(d1, edge.n1), (d2, edge.n2)]
    ends.sort(key=lambda item: item[0])
    (near_d, near_id), (far_d, far_id) = ends
    text = (
        f"The closest point on the road network is on edge {edge.n1} - {edge.n2}, "
        f"which is part of {edge.street_name}, between {model.node_label(edge.n1)} "
        f"and {model.node_label(edge.n2)}. I am at a distance of "
        f"{format_meters(near_d)} m from the intersection with {model.node_label(near_id)} "
        f"and {format_meters(far_d)} m from the intersection with {model.node_label(far_id)}."
    )
    if include_intersection_type:
        kind = model.intersection_kind(near_id).value
        text += f" The intersection with {model.node_label(near_id)} is a {kind} intersection."
    return text


def position_context(
    model: MapModel,
    preset: int,
    pos: Point | None = None,
    now: datetime | None = None,
) -> str:
    """The pointing-context paragraph prepended to a transcribed question.

    Empty when nothing is known about the pointing position. Presets 2
    and 3 historically carried the position as an image payload; the
    text engine stands in a bracketed attachment marker for them.
    """
    _check_preset(preset)
    parts: list[str] = []
    if pos is not None:
        if preset == 1:
            parts.append("I am pointing at the map. " + position_description(model, pos))
        elif preset == 2:
            parts.append("[attachment: camera photo of the tactile map, my pointing finger on it]")
        elif preset == 3:
            parts.append("[attachment: rendered map image with a marker at my pointing position]")
        else:
            parts.append(
                "I am pointing at the map. My position in the map reference system is "
                f"({format_meters(pos.x)}, {format_meters(pos.y)}) m. "
                + position_description(model, pos, include_intersection_type=preset >= 7)
            )
    if now is not None:
        parts.append(f"The current time is {now:%A} at {now:%H:%M}.")
    return " ".join(parts)


def combined_prompt(context: str, user_text: str) -> str:
    """Pointing context and user question in one message, separated."""
    return context + PROMPT_SEPARATOR + user_text


def split_combined(text: str) -> tuple[str, str]:
    """Inverse of :func:`combined_prompt` (splits on the first separator)."""
    if PROMPT_SEPARATOR not in text:
        return "", text
    context, user_text = text.split(PROMPT_SEPARATOR, 1)
    return context, user_text


def _check_preset(preset: int) -> None:
    if preset not in PRESET_RANGE:
        raise ValueError(f"preset must be in {PRESET_RANGE.start}..{PRESET_RANGE.stop - 1}, got {preset}")


def _poi_lines_geo(model: MapModel) -> str:
    lines = ["Points of interest on the map:"]
    for pid in sorted(model.pois):
        poi = model.pois[pid]
        lat, lon = geo_position(model.frame, poi.position)
        category = f" ({poi.category})" if poi.category else ""
        lines.append(f"- {poi.name}{category}: latitude {lat:.6f}, longitude {lon:.6f}")
    return "\n".join(lines)


def _poi_lines_full(model: MapModel) -> str:
    lines = ["Points of interest on the map:"]
    for pid in sorted(model.pois):
        poi = model.pois[pid]
        formats = poi_position_formats(poi, model)
        category = f" ({poi.category})" if poi.category else ""
        line = (
            f"- {poi.name}{category}: position ({format_meters(poi.position.x)}, "
            f"{format_meters(poi.position.y)}) m"
        )
        if poi.address:
            line += f"; address: {poi.address}"
        line += f"; {formats.edge_ref}"
        if poi.opening_hours:
            line += f"; open {opening_hours_text(poi)}"
        if poi.facilities:
            line += "; facilities: " + ", ".join(poi.facilities)
        if poi.accessibility:
            line += "; accessibility: " + "; ".join(poi.accessibility)
        if poi.description:
            line += f"; {poi.description}"
        lines.append(line)
    return "\n".join(lines)


def _corner_lines(frame: ReferenceFrame) -> str:
    names = ("northwest", "northeast", "southeast", "southwest")
    corner_bits = ", ".join(
        f"{name} ({lat:.6f}, {lon:.6f})" for name, (lat, lon) in zip(names, frame.corner_geocoords)
    )
    return (
        f"The map covers a rectangle of {format_meters(frame.width_m)} m (east-west) by "
        f"{format_meters(frame.height_m)} m (north-south). Its corners are at: {corner_bits}."
    )


def _surroundings_lines(frame: ReferenceFrame) -> str:
    pairs = frame.surroundings_map()
    bits = [f"to the {cardinal}, {text}" for cardinal, text in pairs.items()]
    return "Beyond the mapped area: " + "; ".join(bits) + "."


def system_instructions(model: MapModel, preset: int) -> str:
    """System prompt for the given instruction preset (1..8, cumulative)."""
    _check_preset(preset)
    frame = model.frame
    sections: list[str] = [PERSONA]
    if preset >= 2:
        sections.append(GROUNDING)
    if preset >= 4 and frame.map_name:
        sections.append(f"The map is called: {frame.map_name}.")
    if model.area_description:
        sections.append("Description of the mapped area: " + model.area_description)
    if preset >= 2:
        sections.append(_corner_lines(frame))
        sections.append(f"The scale of the map is: {frame.scale_text}.")
    if preset >= 4:
        if frame.surroundings:
            sections.append(_surroundings_lines(frame))
        sections.append(LOCAL_FRAME)
    if preset >= 2:
        sections.append(_poi_lines_full(model) if preset >= 4 else _poi_lines_geo(model))
    if preset >= 4:
        include_types = preset >= 7
        if preset == 4:
            sections.append("Road network (structured):\n" + serialize_graph_structured(model))
        else:
            sections.append(
                "Road network:\n" + serialize_graph_text(model, include_intersection_types=include_types)
            )
    if preset >= 6:
        sections.append(TOOLS_DIRECTIVE)
    if preset >= 7:
        sections.append(DISCOVERABLE_DIRECTIVE)
        sections.append(FIRST_STEP_DIRECTIVE)
    if preset >= 8:
        sections.append(INTENT_EXAMPLES)
        sections.append(BOOKMARK_DIRECTIVE)
    return "\n\n".join(sections)
