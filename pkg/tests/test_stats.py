"""Peaks, crowdedness levels, zone ranking, and the seasonal forecast."""

import numpy as np
import pytest

from pulse.analytics import (
    CrowdLevel,
    OccupancySeries,
    crowd_level,
    detect_peaks,
    forecast,
    zone_ranking,
)
from pulse.registry import UnknownBuildingError

from oracle import DAY, WEEK, naive_forecast


def _series(counts, bin_start=0, bin_width=300, building="LIB"):
    return OccupancySeries(building, bin_start, bin_width, tuple(counts))


# --- detect_peaks -----------------------------------------------------------

def test_peaks_spec_example():
    s = _series([0, 2, 1, 0, 0, 0, 0, 9, 4, 0, 5, 0])
    assert detect_peaks(s) == [(7 * 300, 9), (1 * 300, 2)]


def test_peaks_monotone_none():
    assert detect_peaks(_series([1, 2, 3, 4])) == []


def test_peaks_constant_none():
    assert detect_peaks(_series([5, 5, 5, 5, 5])) == []


def test_peaks_plateau_not_strict():
    assert detect_peaks(_series([0, 3, 3, 0])) == []


def test_peaks_edges_never_qualify():
    assert detect_peaks(_series([9, 0, 0, 0, 9])) == []


def test_peaks_tie_prefers_earlier():
    s = _series([0, 5, 0, 0, 0, 0, 0, 0, 5, 0])
    assert detect_peaks(s) == [(300, 5), (8 * 300, 5)]


def test_peaks_suppression_within_separation():
    # bin 10 (5) is 3 bins from bin 7 (9): suppressed at separation 6,
    # admitted at separation 3
    s = _series([0, 2, 1, 0, 0, 0, 0, 9, 4, 0, 5, 0])
    assert detect_peaks(s, min_separation_bins=3) == [
        (7 * 300, 9), (10 * 300, 5), (1 * 300, 2)]


def test_peaks_k_limits_output():
    s = _series([0, 9, 0, 0, 0, 0, 0, 0, 8, 0, 0, 0, 0, 0, 0, 7, 0])
    assert detect_peaks(s, k=2) == [(300, 9), (8 * 300, 8)]


def test_peaks_respect_bin_start():
    s = _series([0, 4, 0], bin_start=7200)
    assert detect_peaks(s) == [(7500, 4)]


@pytest.mark.parametrize("seed", range(10))
def test_peaks_properties(seed):
    rng = np.random.default_rng(seed)
    counts = rng.integers(0, 30, 60).tolist()
    s = _series(counts)
    peaks = detect_peaks(s)
    assert len(peaks) <= 3
    values = [c for _, c in peaks]
    assert values == sorted(values, reverse=True)
    bins = [(ts - s.bin_start) // s.bin_width for ts, _ in peaks]
    for b, v in zip(bins, values):
        assert counts[b] == v
        assert 0 < b < len(counts) - 1
        assert counts[b] > counts[b - 1] and counts[b] > counts[b + 1]
    for i, a in enumerate(bins):
        for b in bins[i + 1:]:
            assert abs(a - b) >= 6


# --- crowd_level ------------------------------------------------------------

def test_level_zero_is_quiet():
    for baseline in (0, 50, 1000):
        assert crowd_level(0, baseline) is CrowdLevel.QUIET


def test_level_packed_example():
    assert crowd_level(850, 1000) is CrowdLevel.PACKED


def test_level_floor_example():
    assert crowd_level(10, 0) is CrowdLevel.MODERATE


@pytest.mark.parametrize("count,want", [
    (19, CrowdLevel.QUIET), (20, CrowdLevel.MODERATE),
    (39, CrowdLevel.MODERATE), (40, CrowdLevel.BUSY),
    (59, CrowdLevel.BUSY), (60, CrowdLevel.CROWDED),
    (79, CrowdLevel.CROWDED), (80, CrowdLevel.PACKED),
    (200, CrowdLevel.PACKED),
])
def test_level_half_open_bands(count, want):
    assert crowd_level(count, 100) is want


def test_level_total_order_and_labels():
    order = [CrowdLevel.QUIET, CrowdLevel.MODERATE, CrowdLevel.BUSY,
             CrowdLevel.CROWDED, CrowdLevel.PACKED]
    assert order == sorted(order)
    assert [lv.label for lv in order] == [
        "Quiet", "Moderate", "Busy", "Crowded", "Packed"]


@pytest.mark.parametrize("baseline", [0, 10, 50, 123, 1000])
def test_level_monotone_in_count(baseline):
    levels = [crowd_level(c, baseline) for c in range(0, 2 * max(baseline, 50))]
    assert all(a <= b for a, b in zip(levels, levels[1:]))


# --- zone_ranking -----------------------------------------------------------

def test_ranking_example(toy_registry):
    got = zone_ranking({"LIB": 120, "CANT": 300}, toy_registry)
    assert got == [("LIFE", 300), ("ACAD", 120), ("SPORT", 0)]


def test_ranking_all_zero_ascending_ids(toy_registry):
    got = zone_ranking({}, toy_registry)
    assert got == [("ACAD", 0), ("LIFE", 0), ("SPORT", 0)]


def test_ranking_tie_breaks_ascending(toy_registry):
    got = zone_ranking({"LIB": 50, "GYM": 50}, toy_registry)
    assert got == [("ACAD", 50), ("SPORT", 50), ("LIFE", 0)]


def test_ranking_sums_within_zone(toy_registry):
    got = zone_ranking({"CANT": 10, "DORM": 15, "LIB": 9}, toy_registry)
    assert got == [("LIFE", 25), ("ACAD", 9), ("SPORT", 0)]


def test_ranking_unknown_building_errors(toy_registry):
    with pytest.raises(UnknownBuildingError):
        zone_ranking({"NOPE": 1}, toy_registry)


# --- forecast ---------------------------------------------------------------

MONDAY = 1554076800  # 2019-04-01 00:00 UTC


def test_forecast_constant_history():
    s = _series([7] * (2 * DAY // 300), bin_start=MONDAY)
    assert forecast(s, 10) == [7] * 10


def test_forecast_weekly_mean_example():
    n = 2 * WEEK // 300
    counts = [0] * n
    noon = 12 * 3600 // 300
    counts[noon] = 100
    counts[WEEK // 300 + noon] = 200
    s = _series(counts, bin_start=MONDAY)
    horizon = WEEK // 300
    got = forecast(s, horizon)
    assert got[noon] == 150


def test_forecast_short_history_time_of_day_fallback():
    # one day of history, forecasting the following days: every slot falls
    # back to the time-of-day mean, which is the day's own value
    pattern = [(i * 13) % 29 for i in range(DAY // 300)]
    s = _series(pattern, bin_start=MONDAY)
    got = forecast(s, 2 * DAY // 300)
    assert got == pattern + pattern


def test_forecast_periodic_week_reproduced():
    pattern = [(i * 7) % 23 for i in range(WEEK // 300)]
    s = _series(pattern * 4, bin_start=MONDAY)
    assert forecast(s, WEEK // 300) == pattern


def test_forecast_rounds_half_up():
    n = 2 * WEEK // 300
    counts = [0] * n
    counts[0] = 1
    counts[WEEK // 300] = 2
    s = _series(counts, bin_start=MONDAY)
    assert forecast(s, 1)[0] == 2  # mean 1.5 rounds up


def test_forecast_empty_history_zeros():
    s = _series([])
    assert forecast(s, 4) == [0, 0, 0, 0]


def test_forecast_zero_horizon():
    s = _series([1, 2, 3])
    assert forecast(s, 0) == []


def test_forecast_negative_horizon_rejected():
    with pytest.raises(ValueError):
        forecast(_series([1]), -1)


@pytest.mark.parametrize("seed", range(15))
def test_forecast_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 3 * WEEK // 300))
    counts = rng.integers(0, 500, n).tolist()
    start = int(rng.integers(0, 4)) * 300 + MONDAY - int(rng.integers(0, DAY // 300)) * 300
    horizon = int(rng.integers(0, DAY // 300))
    s = _series(counts, bin_start=start)
    assert forecast(s, horizon) == naive_forecast(counts, start, 300, horizon)
