from __future__ import annotations

import io
import json
import math

import pytest

from tactimap.model import (
    IntersectionKind,
    MapValidationError,
    Point,
    feature_announcement,
    feature_details,
    format_meters,
    is_open,
    load_map,
    opening_hours_text,
    poi_position_formats,
    project_on_segment,
    serialize_graph_structured,
    serialize_graph_text,
    to_document,
)
from .conftest import FIXTURES
from . import oracles


def minimal_doc() -> dict:
    """Smallest valid document, mutated by the validation tests."""
    return {
        "version": 1,
        "frame": {
            "map_name": "Test Strip",
            "corner_geocoords": [[45.1, 7.6], [45.1, 7.61], [45.09, 7.61], [45.09, 7.6]],
            "width_m": 100.0,
            "height_m": 50.0,
            "scale_text": "1 cm is 5 m",
            "surroundings": {},
        },
        "nodes": [
            {"id": "a", "position": [0.0, 25.0]},
            {"id": "b", "position": [100.0, 25.0]},
        ],
        "edges": [{"id": "e", "endpoints": ["a", "b"], "street_name": "Test Street"}],
        "pois": [],
        "area_description": "",
    }


# -- parsing and derived graph data -----------------------------------------


def test_grid_parses_with_expected_shape(grid):
    assert len(grid.nodes) == 9
    assert len(grid.edges) == 12
    assert len(grid.pois) == 5
    assert grid.frame.map_name == "Riverside District Tactile Map"
    assert grid.frame.width_m == 620.0 and grid.frame.height_m == 160.0
    assert grid.frame.surroundings_map()["north"].startswith("the railway station")


def test_edge_lengths_match_hand_values(grid):
    # horizontal blocks are 310 m, vertical blocks 80 m
    for eid in ("e1", "e2", "e3", "e4", "e5", "e6"):
        assert grid.edge_length(eid) == pytest.approx(310.0)
    for eid in ("e7", "e8", "e9", "e10", "e11", "e12"):
        assert grid.edge_length(eid) == pytest.approx(80.0)


def test_node_degrees_match_hand_values(grid):
    degrees = {nid: grid.node_degree(nid) for nid in grid.nodes}
    assert degrees == {
        "n1": 2, "n2": 3, "n3": 2,
        "n4": 3, "n5": 4, "n6": 3,
        "n7": 2, "n8": 3, "n9": 2,
    }


def test_intersection_kinds(grid):
    # n5 and n4 are authored; the rest derive from degree
    assert grid.intersection_kind("n5") is IntersectionKind.FOUR_WAY
    assert grid.intersection_kind("n4") is IntersectionKind.T
    assert grid.intersection_kind("n2") is IntersectionKind.T
    assert grid.intersection_kind("n1") is IntersectionKind.OTHER
    assert grid.intersection_kind("n9") is IntersectionKind.OTHER


def test_node_label_falls_back_to_id(two_nodes):
    assert two_nodes.node_label("n1") == "west corner"
    stripped = to_document(two_nodes)
    del stripped["nodes"][0]["label"]
    model = load_map(json.dumps(stripped))
    assert model.node_label("n1") == "n1"


def test_load_accepts_bytes_and_streams():
    text = (FIXTURES / "two_nodes.json").read_text(encoding="utf-8")
    assert load_map(text.encode("utf-8")).frame.map_name == "Main Street Block"
    assert load_map(io.StringIO(text)).frame.map_name == "Main Street Block"
    assert load_map(io.BytesIO(text.encode("utf-8"))).frame.map_name == "Main Street Block"


def test_load_tolerates_trailing_prose():
    text = (FIXTURES / "two_nodes.json").read_text(encoding="utf-8")
    model = load_map(text + "\nThis paragraph is not JSON and must be ignored.")
    assert model.edge_length("e1") == pytest.approx(310.0)


def test_version_is_checked():
    doc = minimal_doc()
    doc["version"] = 2
    with pytest.raises(MapValidationError, match="version"):
        load_map(json.dumps(doc))


# -- validation errors name the offending element ---------------------------


def test_duplicate_node_id_rejected():
    doc = minimal_doc()
    doc["nodes"].append({"id": "a", "position": [50.0, 25.0]})
    with pytest.raises(MapValidationError, match="a"):
        load_map(json.dumps(doc))


def test_unknown_endpoint_rejected():
    doc = minimal_doc()
    doc["edges"][0]["endpoints"] = ["a", "zz"]
    with pytest.raises(MapValidationError, match="zz"):
        load_map(json.dumps(doc))


def test_self_loop_rejected():
    doc = minimal_doc()
    doc["edges"][0]["endpoints"] = ["a", "a"]
    with pytest.raises(MapValidationError):
        load_map(json.dumps(doc))


def test_duplicate_street_between_same_pair_rejected():
    doc = minimal_doc()
    doc["edges"].append({"id": "e2", "endpoints": ["b", "a"], "street_name": "Test Street"})
    with pytest.raises(MapValidationError):
        load_map(json.dumps(doc))


def test_authored_intersection_type_must_match_degree():
    doc = minimal_doc()
    doc["nodes"][0]["intersection_type"] = "T"  # degree 1, not 3
    with pytest.raises(MapValidationError, match="T"):
        load_map(json.dumps(doc))


def test_out_of_bounds_node_rejected():
    doc = minimal_doc()
    doc["nodes"][1]["position"] = [120.0, 25.0]
    with pytest.raises(MapValidationError, match="b"):
        load_map(json.dumps(doc))


def test_poi_out_of_bounds_rejected():
    doc = minimal_doc()
    doc["pois"] = [{"id": "p", "name": "X", "category": "shop", "position": [10.0, 60.0]}]
    with pytest.raises(MapValidationError, match="p"):
        load_map(json.dumps(doc))


def test_authored_closest_edge_must_be_closest():
    doc = minimal_doc()
    doc["nodes"].append({"id": "c", "position": [0.0, 0.0]})
    doc["edges"].append({"id": "f", "endpoints": ["a", "c"], "street_name": "Side Street"})
    # POI sits on edge e; claiming f is its closest edge is wrong
    doc["pois"] = [
        {"id": "p", "name": "X", "category": "shop", "position": [50.0, 25.0], "closest_edge": ["f", 10.0]}
    ]
    with pytest.raises(MapValidationError, match="closest"):
        load_map(json.dumps(doc))


def test_bad_opening_hours_rejected():
    doc = minimal_doc()
    doc["pois"] = [
        {
            "id": "p", "name": "X", "category": "shop", "position": [10.0, 10.0],
            "opening_hours": {"mon": [[600, 400]]},
        }
    ]
    with pytest.raises(MapValidationError):
        load_map(json.dumps(doc))


def test_disconnected_graph_is_a_warning_not_an_error(caplog):
    doc = minimal_doc()
    doc["nodes"] += [
        {"id": "c", "position": [10.0, 40.0]},
        {"id": "d", "position": [90.0, 40.0]},
    ]
    doc["edges"].append({"id": "f", "endpoints": ["c", "d"], "street_name": "Island Road"})
    with caplog.at_level("WARNING"):
        model = load_map(json.dumps(doc))
    assert len(model.edges) == 2
    assert any("connected" in rec.message for rec in caplog.records)


# -- closest-edge derivation, checked against dense sampling ------------------


def test_derived_closest_edges_match_dense_sampling(grid):
    segments = {}
    for eid in grid.edges:
        a, b = grid.edge_points(eid)
        segments[eid] = ((a.x, a.y), (b.x, b.y))
    for poi in grid.pois.values():
        assert poi.closest_edge is not None
        eid, offset = poi.closest_edge
        p = (poi.position.x, poi.position.y)
        held = oracles.dense_min_distance(p, [segments[eid]])
        overall = oracles.dense_min_distance(p, list(segments.values()))
        assert held <= overall + 1e-3
        # offset agrees with direct projection onto the chosen edge
        a, b = grid.edge_points(eid)
        _, proj_offset = project_on_segment(poi.position, a, b)
        assert offset == pytest.approx(proj_offset, abs=1e-9)


def test_expected_closest_edges(grid):
    got = {pid: poi.closest_edge for pid, poi in grid.pois.items()}
    assert got == {
        "p1": ("e4", pytest.approx(40.0)),
        "p2": ("e4", pytest.approx(280.0)),
        "p3": ("e5", pytest.approx(20.0)),
        "p4": ("e9", pytest.approx(20.0)),
        "p5": ("e2", pytest.approx(170.0)),
    }


def test_project_on_segment_clamps_to_endpoints():
    a, b = Point(0.0, 0.0), Point(10.0, 0.0)
    proj, offset = project_on_segment(Point(-5.0, 3.0), a, b)
    assert (proj.x, proj.y, offset) == (0.0, 0.0, 0.0)
    proj, offset = project_on_segment(Point(25.0, -2.0), a, b)
    assert (proj.x, proj.y, offset) == (10.0, 0.0, 10.0)
    proj, offset = project_on_segment(Point(4.0, 7.0), a, b)
    assert (proj.x, proj.y) == (4.0, 0.0)
    assert offset == pytest.approx(4.0)


# -- opening hours -------------------------------------------------------------


def test_is_open_by_hand(grid):
    luna = grid.pois["p1"]  # 17:00-23:30 every day
    assert is_open(luna, 5, 22 * 60)
    assert not is_open(luna, 5, 16 * 60)
    assert is_open(luna, 5, 1020) and is_open(luna, 5, 1410)  # boundaries included
    jazz = grid.pois["p5"]  # fri/sat nights, spilling past midnight
    assert is_open(jazz, 5, 22 * 60)      # saturday 22:00
    assert is_open(jazz, 6, 60)           # sunday 01:00
    assert not is_open(jazz, 2, 22 * 60)  # wednesday
    books = grid.pois["p3"]
    assert not is_open(books, 6, 600)     # closed sundays


def test_opening_hours_text(grid):
    assert opening_hours_text(grid.pois["p1"]).startswith("mon 17:00-23:30; tue 17:00-23:30")
    assert "sat 00:00-02:00, 20:00-23:59" in opening_hours_text(grid.pois["p5"])
    bare = grid.pois["p1"]
    no_hours = json.loads(json.dumps(to_document(grid)))
    for poi in no_hours["pois"]:
        poi.pop("opening_hours", None)
    reloaded = load_map(json.dumps(no_hours))
    assert opening_hours_text(reloaded.pois[bare.id]) == "opening hours unknown"


# -- formatting helpers ---------------------------------------------------------


def test_format_meters():
    assert format_meters(310.0) == "310"
    assert format_meters(20.6155281) == "20.6"
    assert format_meters(99.9999999) == "100"
    assert format_meters(0.05) == "0.1"


def test_poi_position_formats(grid):
    formats = poi_position_formats(grid.pois["p1"], grid)
    assert formats.local == Point(350.0, 95.0)
    assert formats.address == "12 Market Street"
    assert formats.edge_ref == (
        "on edge n5 - n6, part of Market Street, "
        "40 m from Birch Avenue & Market Street and 270 m from Aspen Avenue & Market Street"
    )


# -- round-trip and deterministic serializations ---------------------------------


def test_document_round_trip(grid):
    doc = to_document(grid)
    reloaded = load_map(json.dumps(doc))
    assert to_document(reloaded) == doc
    assert reloaded == grid


def test_structured_serialization_round_trips(grid):
    text = serialize_graph_structured(grid)
    reloaded = load_map(text)  # trailing explanation paragraph is ignored
    assert to_document(reloaded) == to_document(grid)
    assert serialize_graph_structured(grid) == text  # deterministic


def test_graph_text_exact_shape(two_nodes):
    assert serialize_graph_text(two_nodes) == (
        "Street segments:\n"
        "Edge n1 - n2 is part of Main Street, between west corner and east corner. "
        "It is 310 m long.\n"
        "\n"
        "Intersections:\n"
        "Node n1 (west corner) is a other intersection joining 1 street segments.\n"
        "Node n2 (east corner) is a other intersection joining 1 street segments.\n"
    )


def test_graph_text_attributes_and_type_toggle(grid):
    text = serialize_graph_text(grid)
    assert "Edge n2 - n3 is part of Harbor Street" in text
    assert "One-way street, from n3 to n2." in text
    assert "Slope: 2.5% uphill from n4 to n7." in text
    assert "Accessibility: tactile paving strip on the north side." in text
    assert "Node n5 (Birch Avenue & Market Street) is a 4-way intersection joining 4 street segments." in text
    assert "Crossing over Market Street: crosswalk, traffic light, audio signal." in text
    without = serialize_graph_text(grid, include_intersection_types=False)
    assert "4-way" not in without
    assert "Node n5 (Birch Avenue & Market Street) joining 4 street segments." in without


# -- spoken feature text -----------------------------------------------------------


def test_feature_announcements(grid):
    assert feature_announcement(grid, "street_edge", "e4") == "Market Street"
    assert feature_announcement(grid, "intersection_node", "n5") == "Birch Avenue & Market Street"
    assert feature_announcement(grid, "poi", "p1") == "Luna Trattoria"
    with pytest.raises(ValueError):
        feature_announcement(grid, "region", "x")


def test_feature_details(grid):
    node_text = feature_details(grid, "intersection_node", "n5")
    assert node_text.startswith("Birch Avenue & Market Street, a 4-way intersection.")
    assert "crossing over Market Street: crosswalk, traffic light, audio signal" in node_text
    edge_text = feature_details(grid, "street_edge", "e2")
    assert "one-way toward" in edge_text and "paving asphalt" in edge_text
    poi_text = feature_details(grid, "poi", "p2")
    assert poi_text.startswith("Hotel Meridian, hotel.")
    assert "facilities: wifi, accessible entrance" in poi_text


def test_point_distance_matches_hypot():
    assert Point(3.0, 0.0).dist(Point(0.0, 4.0)) == pytest.approx(math.hypot(3, 4))
