# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; behavior matches pulse._kernels.py_impl exactly."""

import numpy as np

from libc.stdint cimport int8_t, int32_t, int64_t

DEF KIND_DISCONNECT = 2


def sessionize_scan(ts, dev, bld, kind, idle_timeout):
    """See py_impl.sessionize_scan; identical rules and output."""
    cdef const int64_t[::1] ts_v = np.ascontiguousarray(ts, dtype=np.int64)
    cdef const int32_t[::1] dev_v = np.ascontiguousarray(dev, dtype=np.int32)
    cdef const int32_t[::1] bld_v = np.ascontiguousarray(bld, dtype=np.int32)
    cdef const int8_t[::1] kind_v = np.ascontiguousarray(kind, dtype=np.int8)
    cdef Py_ssize_t n = ts_v.shape[0]
    cdef int64_t timeout = idle_timeout

    out_dev_arr = np.empty(n, dtype=np.int32)
    out_bld_arr = np.empty(n, dtype=np.int32)
    out_start_arr = np.empty(n, dtype=np.int64)
    out_end_arr = np.empty(n, dtype=np.int64)
    cdef int32_t[::1] out_dev = out_dev_arr
    cdef int32_t[::1] out_bld = out_bld_arr
    cdef int64_t[::1] out_start = out_start_arr
    cdef int64_t[::1] out_end = out_end_arr

    cdef Py_ssize_t i, m = 0
    cdef bint has_open = False
    cdef int32_t cur_dev = -1, cur_bld = -1, d, b
    cdef int64_t s_start = 0, last_seen = 0, t, end
    cdef int8_t k

    for i in range(n):
        d = dev_v[i]
        t = ts_v[i]
        b = bld_v[i]
        k = kind_v[i]
        if has_open and d != cur_dev:
            out_dev[m] = cur_dev
            out_bld[m] = cur_bld
            out_start[m] = s_start
            out_end[m] = last_seen + timeout
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
            if t - last_seen <= timeout:
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
            out_dev[m] = d
            out_bld[m] = cur_bld
            out_start[m] = s_start
            out_end[m] = last_seen + timeout
            m += 1
        else:
            end = last_seen + timeout
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
        out_end[m] = last_seen + timeout
        m += 1

    return (
        out_dev_arr[:m].copy(),
        out_bld_arr[:m].copy(),
        out_start_arr[:m].copy(),
        out_end_arr[:m].copy(),
    )


def bin_rows(dev, row, start, end, n_rows, span_start, span_end, bin_width):
    """See py_impl.bin_rows; identical semantics."""
    cdef const int32_t[::1] dev_v = np.ascontiguousarray(dev, dtype=np.int32)
    cdef const int32_t[::1] row_v = np.ascontiguousarray(row, dtype=np.int32)
    cdef const int64_t[::1] start_v = np.ascontiguousarray(start, dtype=np.int64)
    cdef const int64_t[::1] end_v = np.ascontiguousarray(end, dtype=np.int64)
    cdef int64_t w = bin_width, lo = span_start, hi = span_end
    cdef Py_ssize_t n_bins = (hi - lo) // w
    cdef Py_ssize_t rows = n_rows

    diff_arr = np.zeros((rows, n_bins + 1), dtype=np.int64)
    cdef int64_t[:, ::1] diff = diff_arr
    last_end_arr = np.zeros(rows, dtype=np.int64)
    stamp_arr = np.full(rows, -1, dtype=np.int32)
    cdef int64_t[::1] last_end = last_end_arr
    cdef int32_t[::1] stamp = stamp_arr

    cdef Py_ssize_t i
    cdef int64_t cs, ce, i0, i1
    cdef int32_t r

    for i in range(dev_v.shape[0]):
        cs = start_v[i]
        ce = end_v[i]
        if cs < lo:
            cs = lo
        if ce > hi:
            ce = hi
        if ce <= cs:
            continue
        r = row_v[i]
        i0 = (cs - lo) // w
        i1 = (ce - lo + w - 1) // w
        if stamp[r] == dev_v[i]:
            if i0 < last_end[r]:
                i0 = last_end[r]
        else:
            stamp[r] = dev_v[i]
            last_end[r] = 0
        if i0 < i1:
            diff[r, i0] += 1
            diff[r, i1] -= 1
            last_end[r] = i1

    return np.cumsum(diff_arr[:, :n_bins], axis=1)


def movement_pairs(dev, bld, start, end, window_start, window_end, gap_max):
    """See py_impl.movement_pairs; identical semantics."""
    cdef const int32_t[::1] dev_v = np.ascontiguousarray(dev, dtype=np.int32)
    cdef const int32_t[::1] bld_v = np.ascontiguousarray(bld, dtype=np.int32)
    cdef const int64_t[::1] start_v = np.ascontiguousarray(start, dtype=np.int64)
    cdef const int64_t[::1] end_v = np.ascontiguousarray(end, dtype=np.int64)
    cdef int64_t ws = window_start, we = window_end, gmax = gap_max
    cdef Py_ssize_t n = dev_v.shape[0]

    if n < 2:
        return (np.empty(0, dtype=np.int32), np.empty(0, dtype=np.int32))

    from_arr = np.empty(n - 1, dtype=np.int32)
    to_arr = np.empty(n - 1, dtype=np.int32)
    cdef int32_t[::1] out_from = from_arr
    cdef int32_t[::1] out_to = to_arr

    cdef Py_ssize_t i, m = 0
    cdef int64_t gap

    for i in range(n - 1):
        if dev_v[i + 1] != dev_v[i]:
            continue
        if bld_v[i + 1] == bld_v[i]:
            continue
        gap = start_v[i + 1] - end_v[i]
        if gap < 0 or gap > gmax:
            continue
        if start_v[i + 1] < ws or start_v[i + 1] >= we:
            continue
        out_from[m] = bld_v[i]
        out_to[m] = bld_v[i + 1]
        m += 1

    return from_arr[:m].copy(), to_arr[:m].copy()
