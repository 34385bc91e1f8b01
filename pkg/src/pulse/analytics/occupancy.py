"""Occupancy counts and binned time series over sessions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import _kernels
from ..registry import Registry
from .sessions import SessionsLike, SessionSet, as_session_set

DEFAULT_BIN_WIDTH = 300

# Pseudo building id for the campus-wide (all buildings pooled) series.
CAMPUS = "*"


class InvalidSpanError(ValueError):
    """The requested [span_start, span_end) does not tile into whole bins."""


@dataclass(frozen=True)
class OccupancySeries:
    """Distinct-device counts per fixed-width bin for one building.

    Bin i covers [bin_start + i*bin_width, bin_start + (i+1)*bin_width);
    a device is counted in every bin its sessions intersect.
    """

    building_id: str
    bin_start: int
    bin_width: int
    counts: tuple

    def __len__(self) -> int:
        return len(self.counts)

    def bin_ts(self, i: int) -> int:
        return self.bin_start + i * self.bin_width

    @property
    def end(self) -> int:
        return self.bin_start + len(self.counts) * self.bin_width


def _check_span(span_start: int, span_end: int, bin_width: int) -> int:
    if bin_width <= 0:
        raise InvalidSpanError(f"bin_width must be positive, got {bin_width}")
    if span_end <= span_start:
        raise InvalidSpanError(f"empty span [{span_start}, {span_end})")
    if (span_end - span_start) % bin_width:
        raise InvalidSpanError(
            f"span length {span_end - span_start} is not a multiple of bin_width {bin_width}"
        )
    return (span_end - span_start) // bin_width


def occupancy_at(sessions: SessionsLike, registry: Registry, t: int) -> dict:
    """Distinct devices present per building at instant ``t``.

    Every registered building appears in the result, zeros included.
    """
    ss = as_session_set(sessions, registry)
    ids = registry.building_ids()
    pos = {b: i for i, b in enumerate(ids)}
    counts = np.zeros(len(ids), dtype=np.int64)
    active = (ss.start <= t) & (t < ss.end)
    if active.any():
        nb = len(ss.building_ids)
        # distinct (device, building) pairs; a device straddling the instant
        # with several sessions at one building must count once
        pair = ss.dev[active].astype(np.int64) * nb + ss.bld[active]
        for code in np.unique(pair):
            counts[pos[ss.building_ids[int(code % nb)]]] += 1
    return {b: int(counts[i]) for i, b in enumerate(ids)}


def bin_series(
    sessions: SessionsLike,
    building_id: str,
    span_start: int,
    span_end: int,
    bin_width: int = DEFAULT_BIN_WIDTH,
    registry: Optional[Registry] = None,
) -> OccupancySeries:
    """Distinct-device counts at one building for each bin tiling the span."""
    n_bins = _check_span(span_start, span_end, bin_width)
    ss = as_session_set(sessions, registry)
    idx = ss.building_index(building_id)
    if idx is None:
        return OccupancySeries(building_id, span_start, bin_width, (0,) * n_bins)
    keep = ss.bld == idx
    rows = _kernels.bin_rows(
        ss.dev[keep], np.zeros(int(keep.sum()), dtype=np.int32),
        ss.start[keep], ss.end[keep], 1, span_start, span_end, bin_width,
    )
    return OccupancySeries(building_id, span_start, bin_width, tuple(int(c) for c in rows[0]))


def campus_series(
    sessions: SessionsLike,
    span_start: int,
    span_end: int,
    bin_width: int = DEFAULT_BIN_WIDTH,
    registry: Optional[Registry] = None,
) -> OccupancySeries:
    """Campus-wide distinct-device counts per bin (all buildings pooled).

    A device seen in two buildings during one bin counts once here, so the
    campus series is not the column sum of the per-building series.
    """
    n_bins = _check_span(span_start, span_end, bin_width)
    ss = as_session_set(sessions, registry)
    rows = _kernels.bin_rows(
        ss.dev, np.zeros(ss.session_count, dtype=np.int32),
        ss.start, ss.end, 1, span_start, span_end, bin_width,
    )
    del n_bins
    return OccupancySeries(CAMPUS, span_start, bin_width, tuple(int(c) for c in rows[0]))


def building_bin_matrix(
    sessions: SessionsLike,
    registry: Registry,
    span_start: int,
    span_end: int,
    bin_width: int = DEFAULT_BIN_WIDTH,
) -> tuple:
    """(building_ids, counts[building, bin]) for all registered buildings at once.

    One kernel pass; rows follow registry id order.
    """
    _check_span(span_start, span_end, bin_width)
    ss = as_session_set(sessions, registry)
    ids = registry.building_ids()
    pos = {b: i for i, b in enumerate(ids)}
    row = np.asarray([pos[ss.building_ids[j]] for j in range(len(ss.building_ids))],
                     dtype=np.int32)[ss.bld] if ss.session_count else np.empty(0, dtype=np.int32)
    rows = _kernels.bin_rows(ss.dev, row, ss.start, ss.end,
                             len(ids), span_start, span_end, bin_width)
    return ids, rows


def baseline_max(
    sessions: SessionsLike,
    registry: Registry,
    at: int,
    days: int = 14,
    bin_width: int = DEFAULT_BIN_WIDTH,
) -> dict:
    """Per-building max binned occupancy over the trailing ``days`` before ``at``.

    Bins that predate the data are simply zero, so a short history (cold
    start) degrades to the max over whatever exists.
    """
    span_start = at - days * 86400
    if at <= span_start:
        return {b: 0 for b in registry.building_ids()}
    ids, rows = building_bin_matrix(sessions, registry, span_start, at, bin_width)
    peaks = rows.max(axis=1) if rows.shape[1] else np.zeros(len(ids), dtype=np.int64)
    return {b: int(peaks[i]) for i, b in enumerate(ids)}
