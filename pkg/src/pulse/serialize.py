"""JSON views of the served types.

All field names are snake_case and every collection is emitted in a fixed
deterministic order, so identical inputs serialize to identical bytes;
the replay test depends on that.
"""

from __future__ import annotations

import json

from .analytics import MovementMatrix, OccupancySeries, Snapshot
from .encoding import DisplayPayload

SCHEMA_VERSION = "1"


def series_to_dict(series: OccupancySeries) -> dict:
    return {
        "building_id": series.building_id,
        "bin_start": series.bin_start,
        "bin_width": series.bin_width,
        "counts": list(series.counts),
    }


def matrix_to_dict(matrix: MovementMatrix) -> dict:
    return {
        "window_start": matrix.window_start,
        "window_end": matrix.window_end,
        "building_counts": [
            {"from_building": a, "to_building": b, "count": c}
            for (a, b), c in sorted(matrix.building_counts.items())
        ],
        "zone_counts": [
            {"from_zone": a, "to_zone": b, "count": c}
            for (a, b), c in sorted(matrix.zone_counts.items())
        ],
    }


def snapshot_to_dict(snapshot: Snapshot) -> dict:
    return {
        "at": snapshot.at,
        "per_building_count": {
            b: snapshot.per_building_count[b]
            for b in sorted(snapshot.per_building_count)
        },
        "zone_ranking": [
            {"zone_id": z, "total": t} for z, t in snapshot.zone_ranking
        ],
        "per_building_level": {
            b: snapshot.per_building_level[b].label
            for b in sorted(snapshot.per_building_level)
        },
        "history_24h": {
            b: series_to_dict(snapshot.history_24h[b])
            for b in sorted(snapshot.history_24h)
        },
        "peaks": {
            b: [[ts, c] for ts, c in snapshot.peaks[b]]
            for b in sorted(snapshot.peaks)
        },
        "total_series": series_to_dict(snapshot.total_series),
        "forecast_series": series_to_dict(snapshot.forecast_series),
        "movement": matrix_to_dict(snapshot.movement),
        "ladder_in": [{"building_id": b, "count": c} for b, c in snapshot.ladder_in],
        "ladder_out": [{"building_id": b, "count": c} for b, c in snapshot.ladder_out],
    }


def payload_to_dict(payload: DisplayPayload) -> dict:
    return {
        "generated_at": payload.generated_at,
        "map_points": [
            {
                "building_id": p.building_id,
                "latitude": p.latitude,
                "longitude": p.longitude,
                "base_height": p.base_height,
                "bounce_amplitude_ratio": p.bounce_amplitude_ratio,
                "bounce_period": p.bounce_period,
                "bounce_phase": p.bounce_phase,
                "color": list(p.color),
                "level": p.level.label,
                "count": p.count,
            }
            for p in payload.map_points
        ],
        "popup_rotation": [
            {
                "building_id": p.building_id,
                "name": p.name,
                "icon": p.icon,
                "count": p.count,
                "level": p.level.label,
                "series_24h": series_to_dict(p.series_24h),
                "peak_marks": [[ts, c] for ts, c in p.peak_marks],
                "peak_table": [{"time": t, "count": c} for t, c in p.peak_table],
                "pin": list(p.pin),
            }
            for p in payload.popup_rotation
        ],
        "dwell_seconds": payload.dwell_seconds,
        "zone_ranking": [
            {
                "zone_id": bar.zone_id,
                "name": bar.name,
                "total": bar.total,
                "bar_color": list(bar.bar_color),
            }
            for bar in payload.zone_ranking
        ],
        "totals": {
            "history": series_to_dict(payload.totals.history),
            "forecast": series_to_dict(payload.totals.forecast),
            "boundary_index": payload.totals.boundary_index,
        },
        "chord": {
            "zones": [{"id": z, "name": n} for z, n in payload.chord.zones],
            "entries": [
                {"from_zone": f, "to_zone": t, "count": c}
                for f, t, c in payload.chord.entries
            ],
            "anchors": [
                {
                    "from_zone": a.from_zone,
                    "to_zone": a.to_zone,
                    "count": a.count,
                    "highlighted": a.highlighted,
                    "redundancy_text": a.redundancy_text,
                }
                for a in payload.chord.anchors
            ],
        },
        "ladder_in": [
            {"building_id": r.building_id, "name": r.name, "count": r.count}
            for r in payload.ladder_in
        ],
        "ladder_out": [
            {"building_id": r.building_id, "name": r.name, "count": r.count}
            for r in payload.ladder_out
        ],
    }


def envelope_to_dict(payload: DisplayPayload, virtual_now: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "payload": payload_to_dict(payload),
        "virtual_now": virtual_now,
    }


def dumps(obj: dict) -> str:
    """Compact, key-order-preserving JSON; the wire format everywhere."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)
