"""Deterministic spatial queries over a map model.

All geometry happens in the local metric frame. Every operation that has
to pick among equally good answers breaks ties the same way on every run
(by distance, then by id), so downstream prompt text is reproducible.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .model import (
    IntersectionKind,
    MapModel,
    Point,
    Poi,
    format_meters,
    project_on_segment,
)

CARDINALS = ("east", "northeast", "north", "northwest", "west", "southwest", "south", "southeast")


class RouteNotFound(ValueError):
    """No path joins the requested endpoints."""


def distance(a: Point, b: Point) -> float:
    return a.dist(b)


def is_near(model: MapModel, point: Point, poi_id: str, threshold_m: float) -> bool:
    return point.dist(model.pois[poi_id].position) <= threshold_m


def pois_near(model: MapModel, point: Point, radius_m: float) -> list[tuple[Poi, float]]:
    """POIs within the radius, nearest first (ties by id)."""
    found = []
    for pid in model.pois:
        d = point.dist(model.pois[pid].position)
        if d <= radius_m:
            found.append((d, pid))
    found.sort()
    return [(model.pois[pid], d) for d, pid in found]


@dataclass(frozen=True)
class EdgeProjection:
    edge_id: str
    point: Point  # closest point on the edge
    offset_m: float  # arc distance from the edge's first endpoint
    distance_m: float  # from the query point to the edge


def closest_edge(model: MapModel, point: Point) -> EdgeProjection:
    """Nearest street segment to a point (ties broken by edge id)."""
    if not model.edges:
        raise ValueError("map has no street segments")
    best: EdgeProjection | None = None
    for eid in sorted(model.edges):
        a, b = model.edge_points(eid)
        proj, offset = project_on_segment(point, a, b)
        d = point.dist(proj)
        if best is None or d < best.distance_m - 1e-12:
            best = EdgeProjection(edge_id=eid, point=proj, offset_m=offset, distance_m=d)
    assert best is not None
    return best


def intersection_type(model: MapModel, node_id: str) -> IntersectionKind:
    return model.intersection_kind(node_id)


def bearing_deg(origin: Point, target: Point) -> float:
    """Direction from origin to target, degrees counterclockwise from east."""
    if origin.dist(target) < 1e-12:
        raise ValueError("bearing undefined for coincident points")
    return math.degrees(math.atan2(target.y - origin.y, target.x - origin.x)) % 360.0


def cardinal_of(origin: Point, target: Point) -> str:
    """One of 8 compass winds from origin to target.

    Each wind owns a 45 degree sector centered on its axis; a boundary
    bearing belongs to the counterclockwise-later sector.
    """
    sector = int(((bearing_deg(origin, target) + 22.5) % 360.0) // 45.0)
    return CARDINALS[sector]


# ---------------------------------------------------------------------------
# Routing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RouteLeg:
    """One block of a route: a full traversal of a single street segment."""

    start_id: str
    end_id: str
    edge_id: str
    street_name: str
    length_m: float


@dataclass(frozen=True)
class Route:
    start_id: str
    end_id: str
    legs: tuple[RouteLeg, ...]

    @property
    def length_m(self) -> float:
        return sum(leg.length_m for leg in self.legs)

    def node_ids(self) -> list[str]:
        if not self.legs:
            return [self.start_id]
        return [self.legs[0].start_id] + [leg.end_id for leg in self.legs]


def shortest_route(
    model: MapModel, start_id: str, end_id: str, respect_one_way: bool = False
) -> Route:
    """Shortest path by walked length; ties pick the smallest node-id path.

    Walking routes ignore one-way restrictions by default since they bind
    vehicles, not pedestrians.
    """
    for nid in (start_id, end_id):
        if nid not in model.nodes:
            raise KeyError(f"unknown node {nid!r}")
    if start_id == end_id:
        return Route(start_id=start_id, end_id=end_id, legs=())

    # Heap entries are (length, node path, edge path); the tuple order
    # makes equal-length candidates resolve by lexicographic node path.
    heap: list[tuple[float, tuple[str, ...], tuple[str, ...]]] = [(0.0, (start_id,), ())]
    done: set[str] = set()
    while heap:
        length, node_path, edge_path = heapq.heappop(heap)
        current = node_path[-1]
        if current in done:
            continue
        done.add(current)
        if current == end_id:
            legs = tuple(
                RouteLeg(
                    start_id=node_path[i],
                    end_id=node_path[i + 1],
                    edge_id=eid,
                    street_name=model.edges[eid].street_name,
                    length_m=model.edge_length(eid),
                )
                for i, eid in enumerate(edge_path)
            )
            return Route(start_id=start_id, end_id=end_id, legs=legs)
        for eid in sorted(model.incident_edges(current)):
            edge = model.edges[eid]
            other = edge.n2 if edge.n1 == current else edge.n1
            if other in done:
                continue
            if respect_one_way and edge.one_way is not None and edge.one_way[0] != current:
                continue
            heapq.heappush(
                heap,
                (length + model.edge_length(eid), node_path + (other,), edge_path + (eid,)),
            )
    raise RouteNotFound(f"no route from {start_id!r} to {end_id!r}")


def access_node(model: MapModel, point: Point) -> str:
    """The graph node a person at ``point`` would step onto the network from.

    Projects the point onto its closest street segment, then takes the
    nearer segment endpoint (ties by node id).
    """
    proj = closest_edge(model, point)
    edge = model.edges[proj.edge_id]
    to_n1 = proj.offset_m
    to_n2 = model.edge_length(proj.edge_id) - proj.offset_m
    if abs(to_n1 - to_n2) < 1e-12:
        return min(edge.n1, edge.n2)
    return edge.n1 if to_n1 < to_n2 else edge.n2


def poi_node(model: MapModel, poi_id: str) -> str:
    """The graph node that stands in for a POI when routing."""
    return access_node(model, model.pois[poi_id].position)


# ---------------------------------------------------------------------------
# Turn-by-turn instructions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instruction:
    text: str
    street_name: str
    direction: str  # cardinal of the run's net displacement
    length_m: float
    blocks: int
    start_id: str
    end_id: str


def _turn_word(prev_dir: Point, new_dir: Point) -> str:
    dot = prev_dir.x * new_dir.x + prev_dir.y * new_dir.y
    cross = prev_dir.x * new_dir.y - prev_dir.y * new_dir.x
    angle = math.degrees(math.atan2(cross, dot))
    if abs(angle) < 22.5:
        return "continue straight onto"
    if abs(angle) > 157.5:
        return "turn around onto"
    return "turn left onto" if angle > 0 else "turn right onto"


def route_instructions(model: MapModel, route: Route, accessible: bool = False) -> list[Instruction]:
    """Street-by-street walking instructions, one per same-street run.

    Consecutive legs along the same street merge into a single
    instruction counting blocks and meters. With ``accessible`` set, each
    instruction also reads out paving, accessibility notes and crossing
    aids along the run.
    """
    if not route.legs:
        return []
    runs: list[list[RouteLeg]] = [[route.legs[0]]]
    for leg in route.legs[1:]:
        if leg.street_name == runs[-1][-1].street_name:
            runs[-1].append(leg)
        else:
            runs.append([leg])

    instructions: list[Instruction] = []
    prev_vec: Point | None = None
    for run in runs:
        start = model.nodes[run[0].start_id].position
        end = model.nodes[run[-1].end_id].position
        vec = Point(end.x - start.x, end.y - start.y)
        direction = cardinal_of(start, end)
        length = sum(leg.length_m for leg in run)
        blocks = len(run)
        block_word = "block" if blocks == 1 else "blocks"
        street = run[0].street_name
        if prev_vec is None:
            text = f"Head {direction} on {street} for {blocks} {block_word} ({format_meters(length)} m)."
        else:
            text = (
                f"{_turn_word(prev_vec, vec).capitalize()} {street} and go {direction} "
                f"for {blocks} {block_word} ({format_meters(length)} m)."
            )
        if accessible:
            notes: list[str] = []
            for leg in run:
                edge = model.edges[leg.edge_id]
                if edge.paving:
                    notes.append(f"paving {edge.paving}")
                notes.extend(edge.accessibility)
            seen: list[str] = []
            for note in notes:
                if note not in seen:
                    seen.append(note)
            if seen:
                text += " Along the way: " + "; ".join(seen) + "."
            arrival = model.nodes[run[-1].end_id]
            for c in arrival.crossings:
                aids = [
                    name
                    for name, on in (
                        ("crosswalk", c.crosswalk),
                        ("traffic light", c.traffic_light),
                        ("audio signal", c.audio_signal),
                    )
                    if on
                ]
                if aids:
                    text += f" At {model.node_label(run[-1].end_id)}, crossing over {c.street} has: {', '.join(aids)}."
        instructions.append(
            Instruction(
                text=text,
                street_name=street,
                direction=direction,
                length_m=length,
                blocks=blocks,
                start_id=run[0].start_id,
                end_id=run[-1].end_id,
            )
        )
        prev_vec = vec
    return instructions
