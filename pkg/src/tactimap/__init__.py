"""Conversational tactile-map engine.

A blind user explores a physical tactile street map; the engine tracks
their pointing finger through a camera, answers spoken questions about
the map through a tool-calling chat model, guides them along routes, and
benchmarks its own answer quality.
"""
from .benchmark import Label, Query, Report, classify_heuristic, load_benchmark, run_benchmark
from .config import EngineConfig, load_config
from .conversation import Conversation, LiveBackend, ScriptedBackend
from .events import EventLog, WireEvent, WireEventType
from .homography import CalibrationError, Homography, fit_homography, fit_rectangle_calibration
from .model import MapModel, MapValidationError, Point, load_map
from .navigation import BeaconSession, NavSession
from .pointer import FeedbackMachine, HandFrame, PointerTracker, SnapEngine, parse_trace
from .prompts import combined_prompt, position_context, system_instructions
from .session import Session, replay
from .spatial import cardinal_of, closest_edge, route_instructions, shortest_route
from .tools import ToolContext, catalog, dispatch

__version__ = "0.1.0"

__all__ = [
    "BeaconSession",
    "CalibrationError",
    "Conversation",
    "EngineConfig",
    "EventLog",
    "FeedbackMachine",
    "HandFrame",
    "Homography",
    "Label",
    "LiveBackend",
    "MapModel",
    "MapValidationError",
    "NavSession",
    "Point",
    "PointerTracker",
    "Query",
    "Report",
    "ScriptedBackend",
    "Session",
    "SnapEngine",
    "ToolContext",
    "WireEvent",
    "WireEventType",
    "cardinal_of",
    "catalog",
    "classify_heuristic",
    "closest_edge",
    "combined_prompt",
    "dispatch",
    "fit_homography",
    "fit_rectangle_calibration",
    "load_benchmark",
    "load_config",
    "load_map",
    "parse_trace",
    "position_context",
    "replay",
    "route_instructions",
    "run_benchmark",
    "shortest_route",
    "system_instructions",
    "__version__",
]
