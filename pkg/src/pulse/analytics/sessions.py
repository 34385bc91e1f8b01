"""Sessionization: stitching association events into presence intervals.

All downstream statistics (occupancy, movement, history, forecasts) are
computed from sessions, never from raw events.  Intervals are half-open
[start, end) throughout, which keeps boundary instants from being
counted twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

import numpy as np

from .. import _kernels
from ..events import EventStream
from ..registry import Registry

DEFAULT_IDLE_TIMEOUT = 600


@dataclass(frozen=True)
class DeviceSession:
    """A contiguous presence interval of one device at one building."""

    device_id: str
    building_id: str
    start: int
    end: int


class SessionSet(Mapping):
    """Sessions grouped by device, backed by columnar arrays.

    Behaves as a read-only mapping device_id -> [DeviceSession, ...] (time
    ordered), while the kernels consume the int arrays directly.  Rows are
    sorted by (device, start); one device's sessions never overlap.
    """

    def __init__(self, device_ids, building_ids, dev, bld, start, end,
                 registry: Optional[Registry] = None):
        self.device_ids = tuple(device_ids)
        self.building_ids = tuple(building_ids)
        self.dev = np.asarray(dev, dtype=np.int32)
        self.bld = np.asarray(bld, dtype=np.int32)
        self.start = np.asarray(start, dtype=np.int64)
        self.end = np.asarray(end, dtype=np.int64)
        self.registry = registry
        self._dev_pos = {d: i for i, d in enumerate(self.device_ids)}
        self._bld_pos = {b: i for i, b in enumerate(self.building_ids)}

    def __len__(self) -> int:
        return len(self.device_ids)

    def __iter__(self) -> Iterator[str]:
        return iter(self.device_ids)

    def __getitem__(self, device_id: str) -> list[DeviceSession]:
        i = self._dev_pos[device_id]
        lo = np.searchsorted(self.dev, i, side="left")
        hi = np.searchsorted(self.dev, i, side="right")
        return [
            DeviceSession(device_id, self.building_ids[self.bld[j]],
                          int(self.start[j]), int(self.end[j]))
            for j in range(lo, hi)
        ]

    @property
    def session_count(self) -> int:
        return len(self.dev)

    def all_sessions(self) -> list[DeviceSession]:
        return [s for d in self.device_ids for s in self[d]]

    def min_start(self) -> Optional[int]:
        return int(self.start.min()) if len(self.start) else None

    def building_index(self, building_id: str) -> Optional[int]:
        return self._bld_pos.get(building_id)


def sessionize(events: EventStream, idle_timeout: int = DEFAULT_IDLE_TIMEOUT) -> SessionSet:
    """Group the stream into per-device building sessions.

    An event at the session's building within ``idle_timeout`` of the last
    one extends the session; an explicit disconnect closes it at its own
    timestamp; an event at another building closes it at
    min(last_seen + idle_timeout, new event ts) and opens the next one; a
    session nothing ever closes ends at last_seen + idle_timeout.
    """
    if idle_timeout <= 0:
        raise ValueError("idle_timeout must be positive")
    registry = events.registry
    building_ids = registry.building_ids()
    bld_pos = {b: i for i, b in enumerate(building_ids)}
    # ap index -> building index, via the registry binding
    ap_to_bld = np.asarray(
        [bld_pos[registry.aps[a].building_id] for a in events.ap_ids], dtype=np.int32
    ) if events.ap_ids else np.empty(0, dtype=np.int32)

    # Stable sort by device keeps each device's events in stream (time) order.
    order = np.argsort(events.dev_idx, kind="stable")
    dev = events.dev_idx[order]
    ts = events.ts[order]
    bld = ap_to_bld[events.ap_idx[order]] if len(order) else np.empty(0, dtype=np.int32)
    kind = events.kind[order]

    sdev, sbld, sstart, send = _kernels.sessionize_scan(ts, dev, bld, kind, idle_timeout)
    return SessionSet(events.device_ids, building_ids, sdev, sbld, sstart, send, registry)


SessionsLike = Union[SessionSet, Mapping, Iterable]


def as_session_set(sessions: SessionsLike, registry: Optional[Registry] = None) -> SessionSet:
    """Coerce a grouped mapping (or a flat iterable) of DeviceSession to a SessionSet.

    Sessions of one device must be pairwise disjoint in time (the
    sessionize invariant); the registry, when given, fixes the building
    vocabulary so unknown buildings fail loudly.
    """
    if isinstance(sessions, SessionSet):
        return sessions
    if isinstance(sessions, Mapping):
        flat = [s for group in sessions.values() for s in group]
    else:
        flat = list(sessions)

    if registry is not None:
        building_ids = registry.building_ids()
    else:
        building_ids = sorted({s.building_id for s in flat})
    bld_pos = {b: i for i, b in enumerate(building_ids)}
    device_ids = sorted({s.device_id for s in flat})
    dev_pos = {d: i for i, d in enumerate(device_ids)}

    n = len(flat)
    dev = np.empty(n, dtype=np.int32)
    bld = np.empty(n, dtype=np.int32)
    start = np.empty(n, dtype=np.int64)
    end = np.empty(n, dtype=np.int64)
    for i, s in enumerate(flat):
        dev[i] = dev_pos[s.device_id]
        bld[i] = bld_pos[s.building_id]
        start[i] = s.start
        end[i] = s.end
    order = np.lexsort((start, dev))
    return SessionSet(device_ids, building_ids, dev[order], bld[order],
                      start[order], end[order], registry)
