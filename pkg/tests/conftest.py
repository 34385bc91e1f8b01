"""Shared fixtures plus the acceptance-criteria summary hook."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from pulse.analytics import DeviceSession
from pulse.registry import load_registry, loads_registry

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def registry():
    return load_registry(DATA_DIR / "campus_demo.json")


@pytest.fixture(scope="session")
def ap_ids(registry):
    return sorted(registry.aps)


@pytest.fixture(scope="session")
def building_of_ap(registry):
    return {ap: a.building_id for ap, a in registry.aps.items()}


@pytest.fixture(scope="session")
def zone_of_building(registry):
    return {b: bl.zone_id for b, bl in registry.buildings.items()}


TOY_REGISTRY_DOC = {
    "zones": [
        {"id": "ACAD", "name": "Academic"},
        {"id": "LIFE", "name": "Life"},
        {"id": "SPORT", "name": "Sport"},
    ],
    "buildings": [
        {"id": "LIB", "name": "Library", "zone_id": "ACAD", "latitude": 10.0,
         "longitude": 20.0, "category": "library", "important": True},
        {"id": "CANT", "name": "Canteen", "zone_id": "LIFE", "latitude": 10.1,
         "longitude": 20.1, "category": "canteen", "important": False},
        {"id": "DORM", "name": "Dorm", "zone_id": "LIFE", "latitude": 10.2,
         "longitude": 20.2, "category": "dormitory", "important": False},
        {"id": "GYM", "name": "Gym", "zone_id": "SPORT", "latitude": 10.3,
         "longitude": 20.3, "category": "sports", "important": False},
    ],
    "aps": [
        {"id": "AP-CANT-01", "building_id": "CANT"},
        {"id": "AP-DORM-01", "building_id": "DORM"},
        {"id": "AP-GYM-01", "building_id": "GYM"},
        {"id": "AP-LIB-01", "building_id": "LIB"},
        {"id": "AP-LIB-02", "building_id": "LIB"},
    ],
}


@pytest.fixture()
def toy_registry():
    return loads_registry(json.dumps(TOY_REGISTRY_DOC))


@pytest.fixture()
def toy_building_of_ap(toy_registry):
    return {ap: a.building_id for ap, a in toy_registry.aps.items()}


def sess(dev: str, building: str, start: int, end: int) -> DeviceSession:
    return DeviceSession(dev, building, start, end)


# --- acceptance criteria reporting -----------------------------------------
# One terminal line per acceptance criterion, derived from the outcomes of
# the tests in test_acceptance.py.

ACCEPTANCE_CRITERIA = [
    ("Occupancy oracle (exact, suite < 10 s)", ["test_occupancy_oracle"]),
    ("Movement oracle (exact)", ["test_movement_oracle"]),
    ("Encoding anchors (cyan 200 / red 1000, midpoints within 1)",
     ["test_encoding_anchors"]),
    ("Bounce bounds (0.8/1.2 x base within 1e-9)", ["test_bounce_bounds"]),
    ("Top-ten anchoring (50 random matrices, exact)", ["test_top_ten_anchoring"]),
    ("Forecast oracle (exact after rounding)", ["test_forecast_oracle"]),
    ("Snapshot consistency (totals, ladders, R1, R2)",
     ["test_snapshot_consistency"]),
    ("End-to-end desk scale (analyze < 60 s; deterministic replay)",
     ["test_e2e_gen_analyze_under_60s", "test_e2e_replay_determinism"]),
]

_outcomes: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].split("[")[0]
    if report.when == "call":
        _outcomes[name] = report.outcome
    elif report.outcome in ("failed", "skipped") and name not in _outcomes:
        _outcomes[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for label, names in ACCEPTANCE_CRITERIA:
        seen = [_outcomes.get(n) for n in names]
        if all(o == "passed" for o in seen):
            status = "PASS"
        elif any(o == "failed" for o in seen):
            status = "FAIL"
        elif any(o == "skipped" for o in seen):
            status = "SKIPPED"
        else:
            status = "NOT RUN"
        terminalreporter.write_line(f"{status:8s} {label}")
