"""Movement matrix, zone roll-up, and flux ladders."""

import numpy as np
import pytest

from pulse.analytics import (
    MovementMatrix,
    as_session_set,
    movement_matrix,
    sessionize,
    top_flux,
)
from pulse.events import read_log

from conftest import sess
from oracle import (
    event_lines,
    naive_movement,
    naive_sessionize,
    naive_zone_rollup,
    random_events,
)


def test_round_trip_example(toy_registry):
    ss = as_session_set({"d": [
        sess("d", "LIB", 0, 600),
        sess("d", "CANT", 900, 1500),
        sess("d", "LIB", 1800, 2400),
    ]}, toy_registry)
    m = movement_matrix(ss, toy_registry, 0, 3600)
    assert m.building_counts == {("LIB", "CANT"): 1, ("CANT", "LIB"): 1}
    assert m.window_start == 0 and m.window_end == 3600
    assert m.total() == 2


def test_single_building_empty_matrix(toy_registry):
    ss = as_session_set({"d": [
        sess("d", "LIB", 0, 600), sess("d", "LIB", 700, 1300),
    ]}, toy_registry)
    m = movement_matrix(ss, toy_registry, 0, 3600)
    assert m.building_counts == {} and m.zone_counts == {}


def test_gap_over_max_excluded(toy_registry):
    ss = as_session_set({"d": [
        sess("d", "LIB", 0, 600), sess("d", "CANT", 4200, 4800),
    ]}, toy_registry)
    m = movement_matrix(ss, toy_registry, 0, 9000)  # gap 3600 > 1800
    assert m.building_counts == {}


def test_gap_boundaries(toy_registry):
    # gap exactly gap_max counts; negative gap (overlap artifacts) does not
    ss = as_session_set({"d": [
        sess("d", "LIB", 0, 600), sess("d", "CANT", 2400, 3000),
    ]}, toy_registry)
    assert movement_matrix(ss, toy_registry, 0, 9000).building_counts == {
        ("LIB", "CANT"): 1}
    ss2 = as_session_set({"d": [
        sess("d", "LIB", 0, 600), sess("d", "CANT", 599, 900),
    ]}, toy_registry)
    assert movement_matrix(ss2, toy_registry, 0, 9000).building_counts == {}


def test_window_filters_on_second_start(toy_registry):
    ss = as_session_set({"d": [
        sess("d", "LIB", 0, 600), sess("d", "CANT", 900, 1500),
    ]}, toy_registry)
    # s2.start = 900: inside [900, 2000) but not [0, 900) or [901, 2000)
    assert movement_matrix(ss, toy_registry, 900, 2000).building_counts != {}
    assert movement_matrix(ss, toy_registry, 0, 900).building_counts == {}
    assert movement_matrix(ss, toy_registry, 901, 2000).building_counts == {}


def test_intra_zone_moves_dropped_from_zone_counts(toy_registry):
    # CANT and DORM share zone LIFE; LIB is ACAD
    ss = as_session_set({
        "a": [sess("a", "CANT", 0, 300), sess("a", "DORM", 400, 700)],
        "b": [sess("b", "LIB", 0, 300), sess("b", "CANT", 400, 700)],
    }, toy_registry)
    m = movement_matrix(ss, toy_registry, 0, 3600)
    assert m.building_counts == {("CANT", "DORM"): 1, ("LIB", "CANT"): 1}
    assert m.zone_counts == {("ACAD", "LIFE"): 1}
    assert sum(m.zone_counts.values()) <= sum(m.building_counts.values())


def test_non_adjacent_sessions_do_not_pair(toy_registry):
    # LIB -> CANT -> GYM yields no LIB -> GYM edge
    ss = as_session_set({"d": [
        sess("d", "LIB", 0, 300),
        sess("d", "CANT", 400, 700),
        sess("d", "GYM", 800, 1100),
    ]}, toy_registry)
    m = movement_matrix(ss, toy_registry, 0, 3600)
    assert ("LIB", "GYM") not in m.building_counts
    assert m.total() == 2


def test_top_flux_example():
    m = MovementMatrix(0, 3600,
                       {("A", "B"): 3, ("C", "B"): 2, ("B", "A"): 1}, {})
    ladder_in, ladder_out = top_flux(m)
    assert ladder_in == [("B", 5), ("A", 1)]
    assert ladder_out == [("A", 3), ("C", 2), ("B", 1)]


def test_top_flux_empty():
    assert top_flux(MovementMatrix(0, 3600, {}, {})) == ([], [])


def test_top_flux_truncates_to_five():
    counts = {(f"S{i}", "HUB"): 10 - i for i in range(7)}
    ladder_in, ladder_out = top_flux(MovementMatrix(0, 3600, counts, {}))
    assert ladder_in == [("HUB", sum(10 - i for i in range(7)))]
    assert len(ladder_out) == 5
    assert ladder_out == [("S0", 10), ("S1", 9), ("S2", 8), ("S3", 7), ("S4", 6)]


def test_top_flux_ties_ascending_id():
    m = MovementMatrix(0, 3600, {("B", "Z"): 2, ("A", "Z"): 2, ("C", "Z"): 2}, {})
    _, ladder_out = top_flux(m)
    assert ladder_out == [("A", 2), ("B", 2), ("C", 2)]


@pytest.mark.parametrize("seed", range(20))
def test_matches_oracle(seed, toy_registry, toy_building_of_ap, zone_of_building):
    del zone_of_building
    rng = np.random.default_rng(seed)
    events = random_events(rng, sorted(toy_registry.aps), t_hi=20000)
    ss = sessionize(read_log(event_lines(events), toy_registry))
    naive = naive_sessionize(events, toy_building_of_ap)
    w0, w1 = sorted(int(t) for t in rng.integers(0, 22000, 2)) or (0, 1)
    if w0 == w1:
        w1 += 300
    got = movement_matrix(ss, toy_registry, w0, w1)
    want = naive_movement(naive, w0, w1, 1800)
    assert got.building_counts == want
    toy_zones = {b: bl.zone_id for b, bl in toy_registry.buildings.items()}
    assert got.zone_counts == naive_zone_rollup(want, toy_zones)
