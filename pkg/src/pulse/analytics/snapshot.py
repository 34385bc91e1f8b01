"""The integrated Snapshot: every displayed statistic for one instant."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..events import EventStream
from ..registry import Registry
from . import stats
from .movement import DEFAULT_GAP_MAX, MovementMatrix, movement_matrix, top_flux
from .occupancy import (
    CAMPUS,
    DEFAULT_BIN_WIDTH,
    OccupancySeries,
    baseline_max,
    building_bin_matrix,
    campus_series,
    occupancy_at,
)
from .sessions import DEFAULT_IDLE_TIMEOUT, SessionSet, sessionize

DAY = 86400


@dataclass(frozen=True)
class SnapshotParams:
    """Tuning knobs for snapshot assembly, all with serving defaults."""

    idle_timeout: int = DEFAULT_IDLE_TIMEOUT
    gap_max: int = DEFAULT_GAP_MAX
    bin_width: int = DEFAULT_BIN_WIDTH
    history_seconds: int = DAY
    movement_seconds: int = 3600
    forecast_seconds: int = DAY
    peak_count: int = stats.DEFAULT_PEAK_COUNT
    peak_min_separation_bins: int = stats.DEFAULT_PEAK_SEPARATION_BINS
    baseline_days: int = 14
    ladder_length: int = 5
    forecast_lookback_weeks: int = stats.FORECAST_LOOKBACK_WEEKS

    def __post_init__(self):
        if self.bin_width <= 0:
            raise ValueError("bin_width must be positive")
        for name in ("idle_timeout", "history_seconds", "movement_seconds",
                     "forecast_seconds"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("history_seconds", "forecast_seconds"):
            if getattr(self, name) % self.bin_width:
                raise ValueError(f"{name} must be a multiple of bin_width")

    @property
    def forecast_bins(self) -> int:
        return self.forecast_seconds // self.bin_width


@dataclass(frozen=True)
class Snapshot:
    """All derived statistics at one virtual instant ``at``.

    history/peaks cover the registry's important buildings only;
    counts and levels cover every registered building.
    """

    at: int
    per_building_count: dict
    zone_ranking: list
    per_building_level: dict
    history_24h: dict
    peaks: dict
    total_series: OccupancySeries
    forecast_series: OccupancySeries
    movement: MovementMatrix
    ladder_in: list
    ladder_out: list
    params: SnapshotParams = field(default=SnapshotParams(), compare=False)


def build_snapshot(
    events: EventStream,
    registry: Registry,
    at: int,
    params: Optional[SnapshotParams] = None,
) -> Snapshot:
    """Sessionize the stream and derive the full snapshot at ``at``."""
    params = params or SnapshotParams()
    sessions = sessionize(events, params.idle_timeout)
    return snapshot_from_sessions(sessions, registry, at, params)


def snapshot_from_sessions(
    sessions: SessionSet,
    registry: Registry,
    at: int,
    params: Optional[SnapshotParams] = None,
) -> Snapshot:
    """Snapshot from pre-built sessions (the serving loop reuses these)."""
    params = params or SnapshotParams()
    w = params.bin_width

    per_building_count = occupancy_at(sessions, registry, at)
    ranking = stats.zone_ranking(per_building_count, registry)

    baseline = baseline_max(sessions, registry, at, params.baseline_days, w)
    per_building_level = {
        b: stats.crowd_level(per_building_count[b], baseline[b])
        for b in registry.building_ids()
    }

    ids, rows = building_bin_matrix(sessions, registry, at - params.history_seconds, at, w)
    row_of = {b: i for i, b in enumerate(ids)}
    history_24h = {}
    peaks = {}
    for building in registry.important_buildings():
        b = building.id
        series = OccupancySeries(b, at - params.history_seconds, w,
                                 tuple(int(c) for c in rows[row_of[b]]))
        history_24h[b] = series
        peaks[b] = stats.detect_peaks(series, params.peak_count,
                                      params.peak_min_separation_bins)

    total_series = campus_series(sessions, at - params.history_seconds, at, w,
                                 registry=registry)

    # Forecast looks back up to four whole weeks but never past the data.
    first = sessions.min_start()
    hist_bins = 0
    if first is not None and at > first:
        hist_bins = min(params.forecast_lookback_weeks * 7 * DAY // w,
                        -((first - at) // w))
    if hist_bins:
        hist = campus_series(sessions, at - hist_bins * w, at, w, registry=registry)
    else:
        hist = OccupancySeries(CAMPUS, at, w, ())
    forecast_series = OccupancySeries(
        CAMPUS, at, w, tuple(stats.forecast(hist, params.forecast_bins)))

    movement = movement_matrix(sessions, registry, at - params.movement_seconds, at,
                               params.gap_max)
    ladder_in, ladder_out = top_flux(movement, params.ladder_length)

    return Snapshot(
        at=at,
        per_building_count=per_building_count,
        zone_ranking=ranking,
        per_building_level=per_building_level,
        history_24h=history_24h,
        peaks=peaks,
        total_series=total_series,
        forecast_series=forecast_series,
        movement=movement,
        ladder_in=ladder_in,
        ladder_out=ladder_out,
        params=params,
    )
