from __future__ import annotations

import json

import pytest

from tactimap.config import EngineConfig, load_config


def test_defaults():
    cfg = EngineConfig()
    assert cfg.capture_radius_m == 12.0
    assert cfg.release_radius_m == 20.0
    assert cfg.dwell_threshold_s == 1.5
    assert cfg.collinearity_tol_deg == 12.0
    assert cfg.smoothing_window == 20
    assert cfg.busy_tick_interval_s == 7.0
    assert cfg.off_route_budget_m == 25.0
    assert cfg.arrival_radius_m == 10.0
    assert cfg.cue_min_interval_s == 1.0
    assert cfg.max_tool_rounds == 8
    assert cfg.walking_speed_mps == 1.2


def test_release_must_cover_capture():
    with pytest.raises(ValueError):
        EngineConfig(capture_radius_m=30.0, release_radius_m=20.0)
    # equal radii are allowed: hysteresis degenerates but stays consistent
    EngineConfig(capture_radius_m=20.0, release_radius_m=20.0)


def test_file_values_override_defaults(tmp_path):
    path = tmp_path / "engine.json"
    path.write_text(json.dumps({"capture_radius_m": 8, "smoothing_window": 5}))
    cfg = load_config(path, env={})
    assert cfg.capture_radius_m == 8.0
    assert isinstance(cfg.capture_radius_m, float)
    assert cfg.smoothing_window == 5
    assert isinstance(cfg.smoothing_window, int)
    assert cfg.release_radius_m == 20.0


def test_env_overrides_file(tmp_path):
    path = tmp_path / "engine.json"
    path.write_text(json.dumps({"dwell_threshold_s": 3.0}))
    cfg = load_config(path, env={"TACTIMAP_DWELL_THRESHOLD_S": "0.5", "TACTIMAP_MAX_TOOL_ROUNDS": "3"})
    assert cfg.dwell_threshold_s == 0.5
    assert cfg.max_tool_rounds == 3


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "engine.json"
    path.write_text(json.dumps({"capture_radius": 8}))
    with pytest.raises(ValueError, match="capture_radius"):
        load_config(path, env={})


def test_non_object_config_rejected(tmp_path):
    path = tmp_path / "engine.json"
    path.write_text("[1, 2]")
    with pytest.raises(ValueError):
        load_config(path, env={})


def test_invalid_combination_from_env():
    with pytest.raises(ValueError):
        load_config(env={"TACTIMAP_RELEASE_RADIUS_M": "5"})
