"""Peaks, crowd levels, zone rankings and the seasonal forecast."""

from __future__ import annotations

import enum
from typing import Mapping

from ..registry import Registry
from .occupancy import OccupancySeries

WEEK = 7 * 86400
DAY = 86400

BASELINE_FLOOR = 50

DEFAULT_PEAK_COUNT = 3
DEFAULT_PEAK_SEPARATION_BINS = 6

FORECAST_LOOKBACK_WEEKS = 4


class CrowdLevel(enum.IntEnum):
    """Qualitative busyness, ordered quiet to packed."""

    QUIET = 0
    MODERATE = 1
    BUSY = 2
    CROWDED = 3
    PACKED = 4

    @property
    def label(self) -> str:
        return self.name.capitalize()


def crowd_level(count: int, baseline_max: int) -> CrowdLevel:
    """Classify a count against the building's trailing baseline.

    The denominator is floored at BASELINE_FLOOR so a building that has
    been near-empty for two weeks does not flap to Packed on the first
    handful of devices.  Bands are half-open: ratio 0.2 is already
    Moderate, 1.0 and anything above is Packed.
    """
    ratio = count / max(baseline_max, BASELINE_FLOOR)
    if ratio < 0.2:
        return CrowdLevel.QUIET
    if ratio < 0.4:
        return CrowdLevel.MODERATE
    if ratio < 0.6:
        return CrowdLevel.BUSY
    if ratio < 0.8:
        return CrowdLevel.CROWDED
    return CrowdLevel.PACKED


def detect_peaks(
    series: OccupancySeries,
    k: int = DEFAULT_PEAK_COUNT,
    min_separation_bins: int = DEFAULT_PEAK_SEPARATION_BINS,
) -> list:
    """Up to ``k`` strict local maxima as (bin_ts, count), count descending.

    A candidate must beat both neighbours, so the first and last bins never
    qualify.  Selection is greedy from the highest count (earlier bin wins
    ties) and each pick suppresses candidates closer than
    ``min_separation_bins`` bins.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    if min_separation_bins < 1:
        raise ValueError(f"min_separation_bins must be >= 1, got {min_separation_bins}")
    counts = series.counts
    candidates = [
        i for i in range(1, len(counts) - 1)
        if counts[i] > counts[i - 1] and counts[i] > counts[i + 1]
    ]
    candidates.sort(key=lambda i: (-counts[i], i))
    picked: list = []
    for i in candidates:
        if len(picked) >= k:
            break
        if all(abs(i - j) >= min_separation_bins for j in picked):
            picked.append(i)
    return [(series.bin_ts(i), counts[i]) for i in picked]


def zone_ranking(per_building_count: Mapping, registry: Registry) -> list:
    """Zone totals as (zone_id, total), count descending then zone id.

    Every registered zone appears, zero totals included; a count keyed by
    an unregistered building is an error rather than silently dropped.
    """
    totals = {z: 0 for z in registry.zone_ids()}
    for building_id, count in per_building_count.items():
        totals[registry.zone_id_of(building_id)] += count
    return sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))


def _round_half_up_mean(total: int, n: int) -> int:
    # floor(total/n + 1/2) in exact integer arithmetic
    return (2 * total + n) // (2 * n)


def forecast(history: OccupancySeries, horizon_bins: int) -> list:
    """Seasonal-mean forecast for ``horizon_bins`` bins past the history.

    Each future bin takes the mean of the same weekly slot (identical
    day-of-week and time-of-day) over the trailing four weeks, using
    whichever of those slots the history actually covers.  A slot with no
    weekly support falls back to the mean over all history bins at that
    time-of-day, then to the overall history mean; an empty history
    forecasts zeros.  Means round half up.
    """
    if horizon_bins < 0:
        raise ValueError(f"horizon_bins must be non-negative, got {horizon_bins}")
    counts = history.counts
    if not counts or not horizon_bins:
        return [0] * horizon_bins

    w = history.bin_width
    start, end = history.bin_start, history.end
    overall = _round_half_up_mean(sum(counts), len(counts))

    tod_sum: dict = {}
    tod_n: dict = {}
    for i, c in enumerate(counts):
        tod = history.bin_ts(i) % DAY
        tod_sum[tod] = tod_sum.get(tod, 0) + c
        tod_n[tod] = tod_n.get(tod, 0) + 1

    out = []
    for j in range(horizon_bins):
        ts_f = end + j * w
        total = n = 0
        for back in range(1, FORECAST_LOOKBACK_WEEKS + 1):
            ts_h = ts_f - back * WEEK
            if start <= ts_h < end and (ts_h - start) % w == 0:
                total += counts[(ts_h - start) // w]
                n += 1
        if n:
            out.append(_round_half_up_mean(total, n))
            continue
        tod = ts_f % DAY
        if tod in tod_n:
            out.append(_round_half_up_mean(tod_sum[tod], tod_n[tod]))
        else:
            out.append(overall)
    return out
