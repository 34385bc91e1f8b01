"""Pure-Python twins of the compiled kernels.

Every function here has an identical-signature, identical-output
counterpart in ``_speedups.pyx``; parity is enforced by tests.  These
are the hot inner loops of the pipeline (event-scan sessionization,
distinct-device bin coverage, transition extraction); everything else
in the package is ordinary numpy and does not need a twin.
"""

from __future__ import annotations

import numpy as np

KIND_DISCONNECT = 2


def sessionize_scan(ts, dev, bld, kind, idle_timeout):
    """Stitch events (sorted by device, then time) into presence sessions.

    Rules, per device:
      * any event at the current session's building within idle_timeout
        extends the session;
      * an explicit disconnect inside the session closes it at its own ts;
      * an event at a different building closes the session at
        min(last_seen + idle_timeout, event ts) and opens a new one;
      * the same building after a gap > idle_timeout closes and reopens;
      * a disconnect that would have to open a session yields the
        degenerate [ts, ts) session (presence evidence, zero dwell);
      * a session left open ends at last_seen + idle_timeout.

    Returns (dev, bld, start, end) int arrays sorted by (device, start).
    """
    n = len(ts)
    out_dev = np.empty(n, dtype=np.int32)
    out_bld = np.empty(n, dtype=np.int32)
    out_start = np.empty(n, dtype=np.int64)
    out_end = np.empty(n, dtype=np.int64)
    m = 0

    has_open = False
    cur_dev = cur_bld = -1
    s_start = last_seen = 0

    ts_l = ts.tolist() if isinstance(ts, np.ndarray) else list(ts)
    dev_l = dev.tolist() if isinstance(dev, np.ndarray) else list(dev)
    bld_l = bld.tolist() if isinstance(bld, np.ndarray) else list(bld)
    kind_l = kind.tolist() if isinstance(kind, np.ndarray) else list(kind)

    for i in range(n):
        d = dev_l[i]
        t = ts_l[i]
        b = bld_l[i]
        k = kind_l[i]
        if has_open and d != cur_dev:
            out_dev[m] = cur_dev
            out_bld[m] = cur_bld
            out_start[m] = s_start
            out_end[m] = last_seen + idle_timeout
            m += 1
            has_open = False
        if not has_open:
            if k == KIND_DISCONNECT:
                out_dev[m] = d
                out_bld[m] = b
                out_start[m] = t
                out_end[m] = t
                m += 1
            else:
                has_open = True
                cur_dev = d
                cur_bld = b
                s_start = t
                last_seen = t
            continue
        if b == cur_bld:
            if t - last_seen <= idle_timeout:
                if k == KIND_DISCONNECT:
                    out_dev[m] = d
                    out_bld[m] = b
                    out_start[m] = s_start
                    out_end[m] = t
                    m += 1
                    has_open = False
                else:
                    last_seen = t
                continue
            # same building, but the previous session timed out
            out_dev[m] = d
            out_bld[m] = cur_bld
            out_start[m] = s_start
            out_end[m] = last_seen + idle_timeout
            m += 1
        else:
            end = last_seen + idle_timeout
            if t < end:
                end = t
            out_dev[m] = d
            out_bld[m] = cur_bld
            out_start[m] = s_start
            out_end[m] = end
            m += 1
        if k == KIND_DISCONNECT:
            out_dev[m] = d
            out_bld[m] = b
            out_start[m] = t
            out_end[m] = t
            m += 1
            has_open = False
        else:
            cur_bld = b
            s_start = t
            last_seen = t

    if has_open:
        out_dev[m] = cur_dev
        out_bld[m] = cur_bld
        out_start[m] = s_start
        out_end[m] = last_seen + idle_timeout
        m += 1

    return out_dev[:m].copy(), out_bld[:m].copy(), out_start[:m].copy(), out_end[:m].copy()


def bin_rows(dev, row, start, end, n_rows, span_start, span_end, bin_width):
    """Distinct-device counts per (row, bin) over [span_start, span_end).

    ``row`` maps each session to an output row: the building index for a
    per-building matrix, or all zeros to pool sessions (campus-wide or
    single-building series).  Sessions must be sorted by (device, start)
    and be pairwise disjoint per device — the sessionize invariants.
    A device covering a bin through several sessions counts once.
    """
    n_bins = (span_end - span_start) // bin_width
    diff = np.zeros((n_rows, n_bins + 1), dtype=np.int64)

    last_end = [0] * n_rows
    stamp = [-1] * n_rows

    dev_l = dev.tolist() if isinstance(dev, np.ndarray) else list(dev)
    row_l = row.tolist() if isinstance(row, np.ndarray) else list(row)
    start_l = start.tolist() if isinstance(start, np.ndarray) else list(start)
    end_l = end.tolist() if isinstance(end, np.ndarray) else list(end)

    for i in range(len(dev_l)):
        cs = start_l[i]
        ce = end_l[i]
        if cs < span_start:
            cs = span_start
        if ce > span_end:
            ce = span_end
        if ce <= cs:
            continue
        r = row_l[i]
        i0 = (cs - span_start) // bin_width
        i1 = -((ce - span_start) // -bin_width)  # ceil division
        if stamp[r] == dev_l[i]:
            if i0 < last_end[r]:
                i0 = last_end[r]
        else:
            stamp[r] = dev_l[i]
            last_end[r] = 0
        if i0 < i1:
            diff[r, i0] += 1
            diff[r, i1] -= 1
            last_end[r] = i1

    return np.cumsum(diff[:, :n_bins], axis=1)


def movement_pairs(dev, bld, start, end, window_start, window_end, gap_max):
    """Building transitions from adjacent same-device session pairs.

    A pair (s1, s2) counts when the buildings differ, the dwell gap
    s2.start - s1.end lies in [0, gap_max], and s2 starts inside
    [window_start, window_end).  Sessions sorted by (device, start).
    """
    if len(dev) < 2:
        return (np.empty(0, dtype=np.int32), np.empty(0, dtype=np.int32))
    dev = np.asarray(dev)
    bld = np.asarray(bld)
    start = np.asarray(start)
    end = np.asarray(end)
    gap = start[1:] - end[:-1]
    keep = (
        (dev[1:] == dev[:-1])
        & (bld[1:] != bld[:-1])
        & (gap >= 0)
        & (gap <= gap_max)
        & (start[1:] >= window_start)
        & (start[1:] < window_end)
    )
    return bld[:-1][keep].astype(np.int32), bld[1:][keep].astype(np.int32)
