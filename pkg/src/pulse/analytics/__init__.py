"""Derived statistics over association event streams."""

from .movement import DEFAULT_GAP_MAX, MovementMatrix, movement_matrix, top_flux
from .occupancy import (
    CAMPUS,
    DEFAULT_BIN_WIDTH,
    InvalidSpanError,
    OccupancySeries,
    baseline_max,
    bin_series,
    building_bin_matrix,
    campus_series,
    occupancy_at,
)
from .sessions import (
    DEFAULT_IDLE_TIMEOUT,
    DeviceSession,
    SessionSet,
    as_session_set,
    sessionize,
)
from .snapshot import Snapshot, SnapshotParams, build_snapshot, snapshot_from_sessions
from .stats import (
    BASELINE_FLOOR,
    CrowdLevel,
    crowd_level,
    detect_peaks,
    forecast,
    zone_ranking,
)

__all__ = [
    "BASELINE_FLOOR",
    "CAMPUS",
    "CrowdLevel",
    "DEFAULT_BIN_WIDTH",
    "DEFAULT_GAP_MAX",
    "DEFAULT_IDLE_TIMEOUT",
    "DeviceSession",
    "InvalidSpanError",
    "MovementMatrix",
    "OccupancySeries",
    "SessionSet",
    "Snapshot",
    "SnapshotParams",
    "as_session_set",
    "baseline_max",
    "bin_series",
    "build_snapshot",
    "building_bin_matrix",
    "campus_series",
    "crowd_level",
    "detect_peaks",
    "forecast",
    "movement_matrix",
    "occupancy_at",
    "sessionize",
    "snapshot_from_sessions",
    "top_flux",
    "zone_ranking",
]
