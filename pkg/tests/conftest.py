from __future__ import annotations

from pathlib import Path

import pytest

from tactimap.config import EngineConfig
from tactimap.model import MapModel, load_map
from tactimap.pointer import HandFrame

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def grid() -> MapModel:
    """Nine-intersection downtown grid with five POIs."""
    return load_map((FIXTURES / "city_grid.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def straight() -> MapModel:
    """Four collinear intersections along one street."""
    return load_map((FIXTURES / "straight_street.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def two_nodes() -> MapModel:
    """Minimal map: one street segment."""
    return load_map((FIXTURES / "two_nodes.json").read_text(encoding="utf-8"))


@pytest.fixture
def config() -> EngineConfig:
    return EngineConfig()


# Landmark templates, relative to the fingertip. Four points per finger,
# base to tip; the classifier needs a straight index and bent others.
_STRAIGHT_INDEX = ((-0.09, 0.0), (-0.06, 0.0), (-0.03, 0.0), (0.0, 0.0))
_CURL = ((0.0, 0.0), (0.03, 0.0), (0.045, -0.025), (0.03, -0.05))
_THUMB = ((-0.02, -0.06), (-0.01, -0.04), (0.0, -0.02), (0.01, -0.01))


def _offset(template, base):
    return tuple((base[0] + dx, base[1] + dy) for dx, dy in template)


def pointing_landmarks(tip: tuple[float, float]) -> tuple[tuple[float, float], ...]:
    """A pointing hand: straight index at ``tip``, three curled fingers."""
    x, y = tip
    return (
        _offset(_STRAIGHT_INDEX, (x, y))
        + _offset(_CURL, (x - 0.1, y + 0.02))
        + _offset(_CURL, (x - 0.1, y + 0.04))
        + _offset(_CURL, (x - 0.1, y + 0.06))
        + _offset(_THUMB, (x, y))
    )


def open_hand_landmarks(tip: tuple[float, float]) -> tuple[tuple[float, float], ...]:
    """All four fingers straight: not a pointing gesture."""
    x, y = tip
    return (
        _offset(_STRAIGHT_INDEX, (x, y))
        + _offset(_STRAIGHT_INDEX, (x, y + 0.02))
        + _offset(_STRAIGHT_INDEX, (x, y + 0.04))
        + _offset(_STRAIGHT_INDEX, (x, y + 0.06))
        + _offset(_THUMB, (x, y))
    )


def fist_landmarks(tip: tuple[float, float]) -> tuple[tuple[float, float], ...]:
    """Index curled too: not a pointing gesture."""
    x, y = tip
    return (
        _offset(_CURL, (x - 0.03, y))
        + _offset(_CURL, (x - 0.1, y + 0.02))
        + _offset(_CURL, (x - 0.1, y + 0.04))
        + _offset(_CURL, (x - 0.1, y + 0.06))
        + _offset(_THUMB, (x, y))
    )


def hand(t_ms: int, tip: tuple[float, float], hand_name: str = "right") -> HandFrame:
    """A pre-classified pointing hand at ``tip`` (pixel == map coordinates)."""
    return HandFrame(t_ms=t_ms, hand=hand_name, tip=tip)
