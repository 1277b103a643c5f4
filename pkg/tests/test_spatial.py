from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tactimap.model import Point
from tactimap.spatial import (
    CARDINALS,
    RouteNotFound,
    access_node,
    bearing_deg,
    cardinal_of,
    closest_edge,
    distance,
    intersection_type,
    is_near,
    poi_node,
    pois_near,
    route_instructions,
    shortest_route,
)
from . import oracles


def edge_table(model):
    return {
        eid: (e.n1, e.n2, model.edge_length(eid))
        for eid, e in model.edges.items()
    }


def node_table(model):
    return {nid: (n.position.x, n.position.y) for nid, n in model.nodes.items()}


# -- point queries ------------------------------------------------------------


def test_distance_is_euclidean():
    assert distance(Point(0.0, 0.0), Point(310.0, 0.0)) == 310.0
    assert distance(Point(1.0, 2.0), Point(4.0, 6.0)) == pytest.approx(5.0)


def test_is_near(grid):
    spot = Point(410.0, 80.0)
    assert is_near(grid, spot, "p1", threshold_m=70.0)   # 61.8 m away
    assert not is_near(grid, spot, "p1", threshold_m=60.0)
    with pytest.raises(KeyError):
        is_near(grid, spot, "p99", threshold_m=10.0)


def test_pois_near_sorted_by_distance(grid):
    got = pois_near(grid, Point(410.0, 80.0), radius_m=400.0)
    ids = [poi.id for poi, _ in got]
    dists = [d for _, d in got]
    assert ids == ["p1", "p5", "p4", "p2", "p3"]
    assert dists == sorted(dists)
    assert dists[0] == pytest.approx(math.hypot(60.0, 15.0))
    # radius filter
    assert [poi.id for poi, _ in pois_near(grid, Point(410.0, 80.0), radius_m=70.0)] == ["p1"]


def test_closest_edge_matches_dense_sampling(grid):
    segments = []
    for eid in sorted(grid.edges):
        a, b = grid.edge_points(eid)
        segments.append(((a.x, a.y), (b.x, b.y)))
    for pos in [Point(410.0, 80.0), Point(20.0, 5.0), Point(300.0, 20.0), Point(550.0, 150.0), Point(1.0, 79.0)]:
        proj = closest_edge(grid, pos)
        want = oracles.dense_min_distance((pos.x, pos.y), segments)
        assert proj.distance_m <= want + 1e-3


def test_closest_edge_fields(grid):
    proj = closest_edge(grid, Point(410.0, 80.0))
    assert proj.edge_id == "e4"
    assert proj.offset_m == pytest.approx(100.0)
    assert proj.distance_m == pytest.approx(0.0)
    assert proj.point == Point(410.0, 80.0)


def test_intersection_type(grid):
    assert intersection_type(grid, "n5").value == "4-way"
    assert intersection_type(grid, "n2").value == "T"
    assert intersection_type(grid, "n1").value == "other"


# -- bearings and cardinals ------------------------------------------------------


def test_bearing_reference_directions():
    o = Point(0.0, 0.0)
    assert bearing_deg(o, Point(1.0, 0.0)) == pytest.approx(0.0)
    assert bearing_deg(o, Point(0.0, 1.0)) == pytest.approx(90.0)
    assert bearing_deg(o, Point(-1.0, 0.0)) == pytest.approx(180.0)
    assert bearing_deg(o, Point(0.0, -1.0)) % 360.0 == pytest.approx(270.0)


def test_bearing_rejects_coincident_points():
    with pytest.raises(ValueError):
        bearing_deg(Point(1.0, 1.0), Point(1.0, 1.0))


def test_cardinal_of_full_circle_sweep():
    """One-degree sweep must agree with the independent angle table."""
    o = Point(0.0, 0.0)
    for deg in range(360):
        rad = math.radians(deg)
        dx, dy = math.cos(rad), math.sin(rad)
        assert cardinal_of(o, Point(dx, dy)) == oracles.cardinal_by_table(dx, dy), deg


def test_cardinal_sector_boundaries():
    o = Point(0.0, 0.0)
    # 22.5 degrees is the first boundary; just below is east, at/above northeast
    below = math.radians(22.4999)
    at = math.radians(22.5)
    assert cardinal_of(o, Point(math.cos(below), math.sin(below))) == "east"
    assert cardinal_of(o, Point(math.cos(at), math.sin(at))) == "northeast"


@settings(max_examples=120, deadline=None)
@given(
    deg=st.floats(0.0, 360.0, exclude_max=True),
    scale=st.floats(1e-6, 1e6),
)
def test_cardinal_is_scale_invariant(deg, scale):
    rad = math.radians(deg)
    o = Point(0.0, 0.0)
    unit = Point(math.cos(rad), math.sin(rad))
    scaled = Point(unit.x * scale, unit.y * scale)
    assert cardinal_of(o, unit) == cardinal_of(o, scaled)


def test_all_cardinal_names_reachable():
    o = Point(0.0, 0.0)
    seen = {cardinal_of(o, Point(math.cos(math.radians(d)), math.sin(math.radians(d)))) for d in range(0, 360, 45)}
    assert seen == set(CARDINALS)


# -- routing ----------------------------------------------------------------------


def test_route_matches_exhaustive_enumeration_on_grid(grid):
    nodes = node_table(grid)
    edges = edge_table(grid)
    for start in sorted(grid.nodes):
        for end in sorted(grid.nodes):
            if start == end:
                continue
            want = oracles.enumerate_best_path(nodes, edges, start, end)
            got = shortest_route(grid, start, end)
            assert want is not None
            assert got.length_m == pytest.approx(want[0])
            assert tuple(got.node_ids()) == want[1]


def test_route_ties_resolve_to_smallest_node_sequence(grid):
    # n1 -> n6 has three 700 m routes; the lexicographically smallest wins
    route = shortest_route(grid, "n1", "n6")
    assert route.node_ids() == ["n1", "n2", "n3", "n6"]
    assert route.length_m == pytest.approx(700.0)


def test_route_same_node_is_empty(grid):
    route = shortest_route(grid, "n5", "n5")
    assert route.legs == ()
    assert route.length_m == 0.0
    assert route.node_ids() == ["n5"]


def test_route_respects_one_way(grid):
    # e2 is one-way n3 -> n2: the direct harbor block is closed northbound-east
    free = shortest_route(grid, "n2", "n3")
    assert free.node_ids() == ["n2", "n3"]
    restricted = shortest_route(grid, "n2", "n3", respect_one_way=True)
    assert restricted.node_ids() == ["n2", "n5", "n6", "n3"]
    assert restricted.length_m == pytest.approx(470.0)
    # and the enumeration oracle agrees
    want = oracles.enumerate_best_path(
        node_table(grid), edge_table(grid), "n2", "n3", one_way={"e2": ("n3", "n2")}
    )
    assert tuple(restricted.node_ids()) == want[1]
    # the allowed direction is unaffected
    assert shortest_route(grid, "n3", "n2", respect_one_way=True).node_ids() == ["n3", "n2"]


def test_route_not_found():
    from tactimap.model import load_map
    import json
    from .test_model import minimal_doc

    doc = minimal_doc()
    doc["nodes"] += [{"id": "c", "position": [10.0, 40.0]}, {"id": "d", "position": [90.0, 40.0]}]
    doc["edges"].append({"id": "f", "endpoints": ["c", "d"], "street_name": "Island Road"})
    model = load_map(json.dumps(doc))
    with pytest.raises(RouteNotFound):
        shortest_route(model, "a", "c")


def test_unknown_node_rejected(grid):
    with pytest.raises(KeyError):
        shortest_route(grid, "n1", "zz")


def test_route_legs_carry_street_names(grid):
    route = shortest_route(grid, "n1", "n6")
    assert [leg.street_name for leg in route.legs] == ["Harbor Street", "Harbor Street", "Aspen Avenue"]
    assert [leg.edge_id for leg in route.legs] == ["e1", "e2", "e11"]


# -- access nodes ---------------------------------------------------------------------


def test_access_node_is_nearer_endpoint(grid):
    assert access_node(grid, Point(410.0, 80.0)) == "n5"   # 100 m vs 210 m
    assert access_node(grid, Point(20.0, 5.0)) == "n1"
    assert access_node(grid, Point(610.0, 150.0)) == "n9"


def test_access_node_midpoint_tie_is_stable(two_nodes):
    # exact midpoint of the only edge: smaller node id wins
    assert access_node(two_nodes, Point(155.0, 10.0)) == "n1"


def test_poi_node(grid):
    assert poi_node(grid, "p1") == "n5"   # 40 m vs 270 m along e4
    assert poi_node(grid, "p2") == "n6"
    assert poi_node(grid, "p3") == "n7"


# -- spoken instructions ----------------------------------------------------------------


def test_straight_street_merges_to_one_instruction(straight):
    route = shortest_route(straight, "m1", "m4")
    instructions = route_instructions(straight, route)
    assert len(instructions) == 1
    assert instructions[0].text == "Head east on Long Lane for 3 blocks (420 m)."
    assert instructions[0].blocks == 3
    assert instructions[0].length_m == pytest.approx(420.0)


def test_instruction_merge_matches_oracle(grid):
    route = shortest_route(grid, "n1", "n6")
    legs = []
    for leg in route.legs:
        a = grid.nodes[leg.start_id].position
        b = grid.nodes[leg.end_id].position
        legs.append((leg.street_name, leg.length_m, (a.x, a.y), (b.x, b.y)))
    runs = oracles.merge_legs(legs)
    instructions = route_instructions(grid, route)
    assert len(instructions) == len(runs)
    for instr, (street, length, count, disp) in zip(instructions, runs):
        assert instr.street_name == street
        assert instr.length_m == pytest.approx(length)
        assert instr.blocks == count
        assert instr.direction == oracles.cardinal_by_table(*disp)


def test_turn_words(grid):
    # east then north is a left turn
    texts = [i.text for i in route_instructions(grid, shortest_route(grid, "n1", "n6"))]
    assert texts == [
        "Head east on Harbor Street for 2 blocks (620 m).",
        "Turn left onto Aspen Avenue and go north for 1 block (80 m).",
    ]
    # south then east is also a left turn
    texts = [i.text for i in route_instructions(grid, shortest_route(grid, "n7", "n2"))]
    assert texts == [
        "Head south on Cedar Avenue for 2 blocks (160 m).",
        "Turn left onto Harbor Street and go east for 1 block (310 m).",
    ]
    # west then north is a right turn
    texts = [i.text for i in route_instructions(grid, shortest_route(grid, "n2", "n4"))]
    assert texts == [
        "Head west on Harbor Street for 1 block (310 m).",
        "Turn right onto Cedar Avenue and go north for 1 block (80 m).",
    ]


def test_continue_straight_when_street_name_changes(two_nodes):
    # a single-leg route has no turn at all
    instructions = route_instructions(two_nodes, shortest_route(two_nodes, "n1", "n2"))
    assert instructions[0].text == "Head east on Main Street for 1 block (310 m)."


def test_accessible_instructions_add_notes(grid):
    route = shortest_route(grid, "n4", "n6")
    plain = route_instructions(grid, route)
    detailed = route_instructions(grid, route, accessible=True)
    assert len(plain) == len(detailed)
    assert "tactile paving strip on the north side" in detailed[0].text
    assert "tactile paving" not in plain[0].text


def test_accessible_instructions_mention_arrival_crossings(grid):
    # the run n4 -> n5 arrives at a node with authored crossing aids
    detailed = route_instructions(grid, shortest_route(grid, "n4", "n5"), accessible=True)
    assert (
        "At Birch Avenue & Market Street, crossing over Market Street has: "
        "crosswalk, traffic light, audio signal." in detailed[0].text
    )


def test_empty_route_has_no_instructions(grid):
    assert route_instructions(grid, shortest_route(grid, "n5", "n5")) == []
