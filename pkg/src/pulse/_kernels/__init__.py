"""Kernel backend selection.

The compiled extension (``_speedups``, built from Cython at install
time) is preferred; the pure-Python twin (``py_impl``) is used when the
extension is absent or when PULSE_PURE_PYTHON=1 is set.  Both expose
the same three functions with identical outputs.
"""

from __future__ import annotations

import os

from . import py_impl

try:
    from . import _speedups  # type: ignore[attr-defined]
except ImportError:
    _speedups = None

_FORCE_PURE = os.environ.get("PULSE_PURE_PYTHON", "") not in ("", "0")
_active = py_impl if (_speedups is None or _FORCE_PURE) else _speedups

sessionize_scan = _active.sessionize_scan
bin_rows = _active.bin_rows
movement_pairs = _active.movement_pairs


def backend_name() -> str:
    """Name of the kernel backend in use: 'cython' or 'python'."""
    return "python" if _active is py_impl else "cython"


def available_backends() -> dict:
    """Importable backends keyed by name (for benchmarks and parity tests)."""
    out = {"python": py_impl}
    if _speedups is not None:
        out["cython"] = _speedups
    return out
