"""Visual encodings: turn a Snapshot into render-ready display parameters.

Everything the kiosk shows is computed here, server-side; the client only
draws.  That keeps the chart/text redundancy pairs consistent by
construction instead of by duplicated client logic.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

from .analytics import CrowdLevel, MovementMatrix, OccupancySeries, Snapshot
from .registry import Registry

AMPLITUDE_RATIO = 0.2
DEFAULT_BOUNCE_PERIOD = 2.0
DEFAULT_HEIGHT_SCALE = 0.5
DEFAULT_ANCHOR_COUNT = 10
DEFAULT_DWELL_SECONDS = 10

RAMP_DOMAIN = 1000
# (position in [0,1], rgb): cool/low colors sit near the map background,
# warm/high ones pop.  Cyan pinned at 200 connections, red from 1000 up.
RAMP_STOPS = (
    (0.0, (0, 92, 230)),
    (0.2, (0, 255, 255)),
    (0.5, (0, 200, 80)),
    (0.75, (255, 220, 0)),
    (1.0, (230, 30, 30)),
)


def color_for_count(count) -> tuple:
    """Piecewise-linear gradient color for an occupancy count.

    Clamped to [0, 1000]; channels are interpolated independently between
    the RAMP_STOPS and rounded half up.
    """
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    v = min(max(count, 0), RAMP_DOMAIN) / RAMP_DOMAIN
    for (v0, c0), (v1, c1) in zip(RAMP_STOPS, RAMP_STOPS[1:]):
        if v <= v1:
            t = (v - v0) / (v1 - v0)
            return tuple(int(a + (b - a) * t + 0.5) for a, b in zip(c0, c1))
    return RAMP_STOPS[-1][1]


def point_height(count, scale: float = DEFAULT_HEIGHT_SCALE) -> float:
    """Column height in scene units: linear in count, unclamped."""
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return scale * count


def bounce_phase(building_id: str) -> float:
    """Per-building animation phase in radians, stable across restarts.

    A 64-bit digest of the id folded to whole degrees; buildings bounce out
    of step with each other but identically from run to run.
    """
    digest = hashlib.blake2b(building_id.encode("utf-8"), digest_size=8).digest()
    return math.radians(int.from_bytes(digest, "big") % 360)


def bounce_height(base: float, t: float, period: float = DEFAULT_BOUNCE_PERIOD,
                  phase: float = 0.0) -> float:
    """Animated height at time ``t``: base within [0.8, 1.2] x base."""
    if base < 0:
        raise ValueError(f"base must be non-negative, got {base}")
    if period <= 0:
        raise ValueError(f"period must be positive, got {period}")
    return base * (1.0 + AMPLITUDE_RATIO * math.sin(2.0 * math.pi * t / period + phase))


@dataclass(frozen=True)
class MapPointEncoding:
    building_id: str
    latitude: float
    longitude: float
    base_height: float
    bounce_amplitude_ratio: float
    bounce_period: float
    bounce_phase: float
    color: tuple
    level: CrowdLevel
    count: int


@dataclass(frozen=True)
class ChordAnchor:
    from_zone: str
    to_zone: str
    count: int
    highlighted: bool
    redundancy_text: str


@dataclass(frozen=True)
class ChordDiagram:
    """Full zone flow matrix plus the anchor list, ready to draw."""

    zones: tuple          # (zone_id, display name) in ascending id order
    entries: tuple        # (from_zone, to_zone, count), ascending (from, to)
    anchors: tuple        # ChordAnchor, count descending


@dataclass(frozen=True)
class PopupPanel:
    building_id: str
    name: str
    icon: str
    count: int
    level: CrowdLevel
    series_24h: OccupancySeries
    peak_marks: tuple     # (ts, count) straight from the snapshot
    peak_table: tuple     # ("HH:MM", count) rows, same data as peak_marks
    pin: tuple            # (latitude, longitude)


@dataclass(frozen=True)
class ZoneBar:
    zone_id: str
    name: str
    total: int
    bar_color: tuple


@dataclass(frozen=True)
class LadderRung:
    building_id: str
    name: str
    count: int


@dataclass(frozen=True)
class TotalsChart:
    """Past and predicted campus series drawn as one line with a divider."""

    history: OccupancySeries
    forecast: OccupancySeries
    boundary_index: int


@dataclass(frozen=True)
class DisplayPayload:
    generated_at: int
    map_points: tuple
    popup_rotation: tuple
    dwell_seconds: int
    zone_ranking: tuple
    totals: TotalsChart
    chord: ChordDiagram
    ladder_in: tuple
    ladder_out: tuple


@dataclass(frozen=True)
class EncodingParams:
    height_scale: float = DEFAULT_HEIGHT_SCALE
    bounce_period: float = DEFAULT_BOUNCE_PERIOD
    anchor_count: int = DEFAULT_ANCHOR_COUNT
    dwell_seconds: int = DEFAULT_DWELL_SECONDS


def anchor_chords(matrix: MovementMatrix, registry: Registry,
                  k: int = DEFAULT_ANCHOR_COUNT) -> list:
    """All nonzero zone edges, the top ``k`` flagged as anchoring points.

    Ranked by count descending, ties by ascending (from, to); highlighted
    edges carry their textual redundancy line, the rest an empty string.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    edges = sorted(matrix.zone_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    anchors = []
    for rank, ((frm, to), count) in enumerate(edges):
        if count <= 0:
            continue
        highlighted = rank < k
        text = ""
        if highlighted:
            text = (f"{registry.zones[frm].name} → {registry.zones[to].name}: "
                    f"{count} moved in the last hour")
        anchors.append(ChordAnchor(frm, to, count, highlighted, text))
    return anchors


def _hhmm(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%H:%M")


def build_popup_rotation(snapshot: Snapshot, registry: Registry,
                         dwell_seconds: int = DEFAULT_DWELL_SECONDS) -> list:
    """One panel per important building, ascending building id."""
    del dwell_seconds  # rotation order is fixed; dwell lives on the payload
    panels = []
    for building in registry.important_buildings():
        b = building.id
        marks = tuple((int(ts), int(c)) for ts, c in snapshot.peaks.get(b, []))
        panels.append(PopupPanel(
            building_id=b,
            name=building.name,
            icon=building.category.value,
            count=snapshot.per_building_count[b],
            level=snapshot.per_building_level[b],
            series_24h=snapshot.history_24h[b],
            peak_marks=marks,
            peak_table=tuple((_hhmm(ts), c) for ts, c in marks),
            pin=(building.latitude, building.longitude),
        ))
    return panels


def build_display_payload(snapshot: Snapshot, registry: Registry,
                          params: Optional[EncodingParams] = None) -> DisplayPayload:
    """Assemble the complete kiosk payload from one snapshot."""
    params = params or EncodingParams()

    map_points = []
    for b in registry.building_ids():
        building = registry.buildings[b]
        count = snapshot.per_building_count[b]
        map_points.append(MapPointEncoding(
            building_id=b,
            latitude=building.latitude,
            longitude=building.longitude,
            base_height=point_height(count, params.height_scale),
            bounce_amplitude_ratio=AMPLITUDE_RATIO,
            bounce_period=params.bounce_period,
            bounce_phase=bounce_phase(b),
            color=color_for_count(count),
            level=snapshot.per_building_level[b],
            count=count,
        ))

    max_total = max((total for _, total in snapshot.zone_ranking), default=0)
    bars = []
    for zone_id, total in snapshot.zone_ranking:
        scaled = total * RAMP_DOMAIN / max_total if max_total > 0 else 0
        bars.append(ZoneBar(zone_id, registry.zones[zone_id].name, total,
                            color_for_count(scaled)))

    chord = ChordDiagram(
        zones=tuple((z, registry.zones[z].name) for z in registry.zone_ids()),
        entries=tuple(sorted((f, t, c) for (f, t), c in snapshot.movement.zone_counts.items())),
        anchors=tuple(anchor_chords(snapshot.movement, registry, params.anchor_count)),
    )

    rung = lambda pairs: tuple(
        LadderRung(b, registry.buildings[b].name, c) for b, c in pairs)

    return DisplayPayload(
        generated_at=snapshot.at,
        map_points=tuple(map_points),
        popup_rotation=tuple(build_popup_rotation(snapshot, registry)),
        dwell_seconds=params.dwell_seconds,
        zone_ranking=tuple(bars),
        totals=TotalsChart(
            history=snapshot.total_series,
            forecast=snapshot.forecast_series,
            boundary_index=len(snapshot.total_series.counts),
        ),
        chord=chord,
        ladder_in=rung(snapshot.ladder_in),
        ladder_out=rung(snapshot.ladder_out),
    )
