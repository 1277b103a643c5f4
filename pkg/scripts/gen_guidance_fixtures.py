"""Regenerate the committed guidance traces and their golden event logs.

Each trace drives one guidance session over the downtown grid fixture:
a compliant walk along the planned route, a walk that cuts away from it
once, and an inward spiral under the homing beacon. Run from the repo
root after any deliberate guidance behavior change, then re-inspect the
printed events before committing.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from tactimap.config import EngineConfig
from tactimap.model import Point, load_map
from tactimap.navigation import BeaconSession, NavSession

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN = ROOT / "tests" / "golden"


def onroute_positions() -> list[list[float]]:
    rows = []
    t = 0
    for x in range(20, 621, 20):  # east along Harbor Street to n3
        t += 500
        rows.append([t, float(x), 0.0])
    for y in range(20, 81, 20):  # north along Aspen Avenue to n6
        t += 500
        rows.append([t, 620.0, float(y)])
    return rows


def offroute_positions() -> list[list[float]]:
    rows = []
    t = 0
    for x in range(20, 311, 20):  # east along Harbor Street to n2
        t += 500
        rows.append([t, float(x), 0.0])
    for y in (20.0, 48.0, 68.0):  # cut north up Birch Avenue instead
        t += 500
        rows.append([t, 310.0, y])
    for x in range(330, 611, 20):  # comply: east along Market Street
        t += 500
        rows.append([t, float(x), 80.0])
    return rows


def spiral_positions(target: Point) -> list[list[float]]:
    rows = []
    for k in range(15):
        r = 5.0 if k == 14 else 150.0 - 10.0 * k
        theta = math.radians(35.0 * k)
        rows.append(
            [
                1000 * (k + 1),
                round(target.x + r * math.cos(theta), 3),
                round(target.y + r * math.sin(theta), 3),
            ]
        )
    return rows


def event_lines(events) -> str:
    return "".join(
        json.dumps(
            {"type": e.type.value, "t_ms": e.t_ms, "text": e.text, "data": e.data},
            sort_keys=True,
        )
        + "\n"
        for e in events
    )


def run_nav(model, doc):
    session = NavSession(model, Point(*doc["start"]), doc["destination"], EngineConfig())
    events = session.start(0)
    for t, x, y in doc["positions"]:
        events.extend(session.update(int(t), Point(x, y)))
    return events


def run_beacon(model, doc):
    target = Point(*doc["target"])
    session = BeaconSession(model, target, doc["target_name"], EngineConfig())
    events = session.start(0)
    for t, x, y in doc["positions"]:
        events.extend(session.update(int(t), Point(x, y)))
    return events


def main() -> None:
    model = load_map((FIXTURES / "city_grid.json").read_text(encoding="utf-8"))
    jazz = model.pois["p5"]

    docs = {
        "guidance_onroute": {
            "kind": "street_by_street",
            "start": [0.0, 0.0],
            "destination": "n6",
            "positions": onroute_positions(),
        },
        "guidance_offroute": {
            "kind": "street_by_street",
            "start": [0.0, 0.0],
            "destination": "n6",
            "positions": offroute_positions(),
        },
        "guidance_spiral": {
            "kind": "fly_me_there",
            "target": [jazz.position.x, jazz.position.y],
            "target_name": jazz.name,
            "positions": spiral_positions(jazz.position),
        },
    }

    for name, doc in docs.items():
        (FIXTURES / f"{name}.json").write_text(
            json.dumps(doc, indent=2) + "\n", encoding="utf-8"
        )
        events = run_beacon(model, doc) if doc["kind"] == "fly_me_there" else run_nav(model, doc)
        lines = event_lines(events)
        (GOLDEN / f"{name}.events.jsonl").write_text(lines, encoding="utf-8")
        print(f"=== {name}: {len(lines.splitlines())} events")
        print(lines)


if __name__ == "__main__":
    main()
