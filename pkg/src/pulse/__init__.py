"""Pulse: campus crowd displays derived from Wi-Fi association logs."""

from . import analytics, encoding, events, registry, serialize, simgen
from ._kernels import backend_name

__version__ = "0.1.0"

__all__ = [
    "analytics",
    "backend_name",
    "encoding",
    "events",
    "registry",
    "serialize",
    "simgen",
    "__version__",
]
