"""Compiled and pure-Python kernels must be indistinguishable."""

import os
import subprocess
import sys

import numpy as np
import pytest

from pulse._kernels import available_backends, backend_name


def _random_event_columns(rng, n_dev=12, n_bld=5, n_ev=400, t_hi=20000):
    ts = rng.integers(0, t_hi, n_ev).astype(np.int64)
    dev = rng.integers(0, n_dev, n_ev).astype(np.int32)
    bld = rng.integers(0, n_bld, n_ev).astype(np.int32)
    kind = rng.choice([0, 1, 1, 1, 2], n_ev).astype(np.int8)
    order = np.lexsort((ts,))
    ts, dev, bld, kind = ts[order], dev[order], bld[order], kind[order]
    by_dev = np.argsort(dev, kind="stable")
    return ts[by_dev], dev[by_dev], bld[by_dev], kind[by_dev]


def _random_sessions(rng, n_dev=10, n_bld=4, per_dev=20, t_hi=30000):
    """Disjoint per-device half-open intervals sorted by (device, start)."""
    dev, bld, start, end = [], [], [], []
    for d in range(n_dev):
        t = int(rng.integers(0, 500))
        for _ in range(int(rng.integers(0, per_dev))):
            s = t + int(rng.integers(0, 900))
            e = s + int(rng.integers(0, 1800))
            dev.append(d)
            bld.append(int(rng.integers(0, n_bld)))
            start.append(s)
            end.append(e)
            t = e
            if t >= t_hi:
                break
    return (np.array(dev, dtype=np.int32), np.array(bld, dtype=np.int32),
            np.array(start, dtype=np.int64), np.array(end, dtype=np.int64))


def test_compiled_backend_is_built_and_active():
    backends = available_backends()
    assert "python" in backends and "cython" in backends
    if os.environ.get("PULSE_PURE_PYTHON", "") in ("", "0"):
        assert backend_name() == "cython"


@pytest.mark.parametrize("seed", range(8))
def test_sessionize_scan_parity(seed):
    backends = available_backends()
    if len(backends) < 2:
        pytest.skip("only one backend importable")
    rng = np.random.default_rng(seed)
    ts, dev, bld, kind = _random_event_columns(rng)
    results = {
        name: mod.sessionize_scan(ts, dev, bld, kind, 600)
        for name, mod in backends.items()
    }
    ref = results["python"]
    for name, got in results.items():
        for a, b in zip(ref, got):
            np.testing.assert_array_equal(a, b, err_msg=f"backend {name}")


@pytest.mark.parametrize("seed", range(8))
def test_bin_rows_parity(seed):
    backends = available_backends()
    if len(backends) < 2:
        pytest.skip("only one backend importable")
    rng = np.random.default_rng(100 + seed)
    dev, bld, start, end = _random_sessions(rng)
    n_rows = int(bld.max()) + 1 if len(bld) else 1
    args = (dev, bld, start, end, n_rows, 0, 30000, 300)
    ref = backends["python"].bin_rows(*args)
    for name, mod in backends.items():
        np.testing.assert_array_equal(ref, mod.bin_rows(*args), err_msg=name)


@pytest.mark.parametrize("seed", range(8))
def test_movement_pairs_parity(seed):
    backends = available_backends()
    if len(backends) < 2:
        pytest.skip("only one backend importable")
    rng = np.random.default_rng(200 + seed)
    dev, bld, start, end = _random_sessions(rng)
    args = (dev, bld, start, end, 5000, 25000, 1800)
    ref = backends["python"].movement_pairs(*args)
    for name, mod in backends.items():
        got = mod.movement_pairs(*args)
        np.testing.assert_array_equal(ref[0], got[0], err_msg=name)
        np.testing.assert_array_equal(ref[1], got[1], err_msg=name)


def test_pure_python_env_forces_fallback():
    env = dict(os.environ, PULSE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from pulse._kernels import backend_name; print(backend_name())"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_empty_inputs_are_fine():
    for mod in available_backends().values():
        e64 = np.empty(0, dtype=np.int64)
        e32 = np.empty(0, dtype=np.int32)
        e8 = np.empty(0, dtype=np.int8)
        d, b, s, e = mod.sessionize_scan(e64, e32, e32, e8, 600)
        assert len(d) == len(b) == len(s) == len(e) == 0
        mat = mod.bin_rows(e32, e32, e64, e64, 3, 0, 3000, 300)
        assert mat.shape == (3, 10) and not mat.any()
        frm, to = mod.movement_pairs(e32, e32, e64, e64, 0, 3000, 1800)
        assert len(frm) == len(to) == 0