"""Movement flows between buildings, derived from consecutive sessions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import _kernels
from ..registry import Registry
from .sessions import SessionsLike, as_session_set

DEFAULT_GAP_MAX = 1800


@dataclass(frozen=True)
class MovementMatrix:
    """Directed movement counts for one time window.

    A device moving A -> B contributes when the gap between the A session's
    end and the B session's start is within [0, gap_max] and the B session
    starts inside [window_start, window_end).  ``zone_counts`` is the same
    flow rolled up to zones, with intra-zone movement dropped.
    """

    window_start: int
    window_end: int
    building_counts: dict = field(default_factory=dict)
    zone_counts: dict = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.building_counts.values())


def movement_matrix(
    sessions: SessionsLike,
    registry: Registry,
    window_start: int,
    window_end: int,
    gap_max: int = DEFAULT_GAP_MAX,
) -> MovementMatrix:
    if window_end < window_start:
        raise ValueError(f"window_end {window_end} before window_start {window_start}")
    if gap_max < 0:
        raise ValueError(f"gap_max must be non-negative, got {gap_max}")
    ss = as_session_set(sessions, registry)
    frm, to = _kernels.movement_pairs(
        ss.dev, ss.bld, ss.start, ss.end, window_start, window_end, gap_max
    )
    building_counts: dict = {}
    zone_counts: dict = {}
    if len(frm):
        nb = len(ss.building_ids)
        codes, n = np.unique(frm.astype(np.int64) * nb + to.astype(np.int64),
                             return_counts=True)
        for code, count in zip(codes, n):
            a = ss.building_ids[int(code) // nb]
            b = ss.building_ids[int(code) % nb]
            building_counts[(a, b)] = int(count)
            za, zb = registry.zone_id_of(a), registry.zone_id_of(b)
            if za != zb:
                key = (za, zb)
                zone_counts[key] = zone_counts.get(key, 0) + int(count)
    return MovementMatrix(window_start, window_end, building_counts, zone_counts)


def top_flux(matrix: MovementMatrix, n: int = 5) -> tuple:
    """(top incoming, top outgoing) buildings as (building_id, count) lists.

    Sorted by count descending, building id ascending on ties; zero-flow
    buildings are left out, so either list may be shorter than ``n``.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    inflow: dict = {}
    outflow: dict = {}
    for (a, b), count in matrix.building_counts.items():
        outflow[a] = outflow.get(a, 0) + count
        inflow[b] = inflow.get(b, 0) + count
    rank = lambda d: sorted(d.items(), key=lambda kv: (-kv[1], kv[0]))[:n]
    return rank(inflow), rank(outflow)
