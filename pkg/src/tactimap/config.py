"""Engine tuning constants, loadable from a JSON file with env overrides.

Every interaction constant that the interaction design names but does not
pin to a number lives here, so deployments can tune them without code
changes. Environment variables of the form ``TACTIMAP_<FIELD>`` (upper
case field name) override both defaults and file values.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from pathlib import Path

ENV_PREFIX = "TACTIMAP_"


@dataclass(frozen=True)
class EngineConfig:
    # Pointer feature gravity: a feature is captured within capture_radius_m
    # and only released beyond release_radius_m.
    capture_radius_m: float = 12.0
    release_radius_m: float = 20.0
    # Seconds of stable pointing before accessibility details are read out.
    dwell_threshold_s: float = 1.5
    # Max angular deviation for a finger landmark chain to count as straight.
    collinearity_tol_deg: float = 12.0
    # Pointer smoothing window, in samples.
    smoothing_window: int = 20
    # Interval between "still working" messages while an answer is pending.
    busy_tick_interval_s: float = 7.0
    # Street-by-street guidance: how far off the planned route before a
    # wrong-direction notice and reroute.
    off_route_budget_m: float = 25.0
    # Both guidance modes: radius around the target that counts as arrival.
    arrival_radius_m: float = 10.0
    # Beacon guidance: minimum seconds between repeated direction cues.
    cue_min_interval_s: float = 1.0
    # Hard cap on tool-call rounds within one conversation turn.
    max_tool_rounds: int = 8
    # Used for walking-time estimates in routing tool results.
    walking_speed_mps: float = 1.2

    def __post_init__(self) -> None:
        if self.release_radius_m < self.capture_radius_m:
            raise ValueError(
                "release_radius_m must be >= capture_radius_m "
                f"({self.release_radius_m} < {self.capture_radius_m})"
            )


def _coerce(field: dataclasses.Field, raw: object) -> object:
    if field.type in ("int", int):
        return int(raw)  # type: ignore[arg-type]
    return float(raw)  # type: ignore[arg-type]


def load_config(path: str | Path | None = None, env: dict[str, str] | None = None) -> EngineConfig:
    """Build an EngineConfig from defaults, an optional JSON file, and env vars.

    Precedence (lowest to highest): dataclass defaults, file values,
    ``TACTIMAP_*`` environment variables.
    """
    env = os.environ if env is None else env
    values: dict[str, object] = {}
    fields = {f.name: f for f in dataclasses.fields(EngineConfig)}
    if path is not None:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise ValueError("config file must contain a JSON object")
        for key, raw in doc.items():
            if key not in fields:
                raise ValueError(f"unknown config key: {key}")
            values[key] = _coerce(fields[key], raw)
    for name, field in fields.items():
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None:
            values[name] = _coerce(field, raw)
    return EngineConfig(**values)  # type: ignore[arg-type]
