"""Wi-Fi association log ingestion.

The log format is newline-delimited JSON, one association event per line:

    {"ts": 1554105600, "dev": "a1b2", "ap": "AP-LIB-01", "ev": "connect"}

``ts`` is unix seconds, ``dev`` an opaque (already hashed) device token,
``ap`` an access-point id, ``ev`` one of connect / poll / disconnect.
Device identifiers are never interpreted here; MAC hashing happens
upstream of this system.

Parsed streams are stored columnar (numpy arrays plus small string
vocabularies) so that multi-million-line logs stay cheap to hold and to
scan; the ``events`` property exposes the classic per-event view.
"""

from __future__ import annotations

import json
from array import array
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Union

import numpy as np

from .registry import Registry

KIND_CONNECT = 0
KIND_POLL = 1
KIND_DISCONNECT = 2

_KIND_CODES = {"connect": KIND_CONNECT, "poll": KIND_POLL, "disconnect": KIND_DISCONNECT}
_KIND_NAMES = ("connect", "poll", "disconnect")

# Late events older than this (relative to the watermark) are dropped in tail mode.
LATE_TOLERANCE = 300


class EventKind(Enum):
    CONNECT = "connect"
    POLL = "poll"
    DISCONNECT = "disconnect"


@dataclass(frozen=True)
class AssociationEvent:
    """One device <-> access-point log record."""

    ts: int
    device_id: str
    ap_id: str
    kind: EventKind


class MalformedLineError(ValueError):
    """A log line that cannot be turned into a valid AssociationEvent."""


def _validate_record(obj) -> tuple[int, str, str, int]:
    """Shared field validation; returns (ts, dev, ap, kind_code)."""
    if not isinstance(obj, dict):
        raise MalformedLineError("record is not a JSON object")
    ts = obj.get("ts")
    if not isinstance(ts, int) or isinstance(ts, bool):
        raise MalformedLineError("field 'ts' must be an integer")
    if ts < 0:
        raise MalformedLineError("field 'ts' must be >= 0")
    dev = obj.get("dev")
    if not isinstance(dev, str) or not dev:
        raise MalformedLineError("field 'dev' must be a non-empty string")
    ap = obj.get("ap")
    if not isinstance(ap, str) or not ap:
        raise MalformedLineError("field 'ap' must be a non-empty string")
    ev = obj.get("ev")
    kind = _KIND_CODES.get(ev)
    if kind is None:
        raise MalformedLineError(f"unknown event kind {ev!r}")
    return ts, dev, ap, kind


def parse_event_line(line: str) -> AssociationEvent:
    """Parse one log line; raises MalformedLineError on any defect."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedLineError(f"invalid JSON: {exc.msg}") from None
    ts, dev, ap, kind = _validate_record(obj)
    return AssociationEvent(ts=ts, device_id=dev, ap_id=ap, kind=EventKind(_KIND_NAMES[kind]))


class _EventView:
    """Read-only sequence of AssociationEvent materialized from the columns."""

    def __init__(self, stream: "EventStream"):
        self._s = stream

    def __len__(self) -> int:
        return len(self._s.ts)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        s = self._s
        return AssociationEvent(
            ts=int(s.ts[i]),
            device_id=s.device_ids[s.dev_idx[i]],
            ap_id=s.ap_ids[s.ap_idx[i]],
            kind=EventKind(_KIND_NAMES[s.kind[i]]),
        )

    def __iter__(self) -> Iterator[AssociationEvent]:
        s = self._s
        dev_ids, ap_ids = s.device_ids, s.ap_ids
        for ts, d, a, k in zip(s.ts.tolist(), s.dev_idx.tolist(), s.ap_idx.tolist(), s.kind.tolist()):
            yield AssociationEvent(ts, dev_ids[d], ap_ids[a], EventKind(_KIND_NAMES[k]))


@dataclass
class EventStream:
    """Validated, time-ordered event sequence bound to a registry.

    Ordering is (ts, device_id, ap_id) non-decreasing; every ap_id resolves
    in ``registry``.  Instances are treated as immutable once built.
    """

    ts: np.ndarray          # int64, sorted per the ordering invariant
    dev_idx: np.ndarray     # int32 index into device_ids
    ap_idx: np.ndarray      # int32 index into ap_ids
    kind: np.ndarray        # int8 event-kind code
    device_ids: tuple       # sorted unique device tokens
    ap_ids: tuple           # sorted unique ap ids, all known to the registry
    registry: Registry
    skipped_unknown_ap: int = 0
    skipped_malformed: int = 0
    events: _EventView = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.events = _EventView(self)

    def __len__(self) -> int:
        return len(self.ts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventStream):
            return NotImplemented
        return (
            self.device_ids == other.device_ids
            and self.ap_ids == other.ap_ids
            and np.array_equal(self.ts, other.ts)
            and np.array_equal(self.dev_idx, other.dev_idx)
            and np.array_equal(self.ap_idx, other.ap_idx)
            and np.array_equal(self.kind, other.kind)
        )

    def first_ts(self) -> int:
        if len(self.ts) == 0:
            raise ValueError("empty stream has no first timestamp")
        return int(self.ts[0])

    def last_ts(self) -> int:
        if len(self.ts) == 0:
            raise ValueError("empty stream has no last timestamp")
        return int(self.ts[-1])


def _sorted_stream(
    ts_list, dev_list, ap_list, kind_list, registry: Registry,
    skipped_unknown_ap: int, skipped_malformed: int,
) -> EventStream:
    """Canonicalize raw columns: vocab-encode and sort by (ts, dev, ap)."""
    n = len(ts_list)
    ts = np.asarray(ts_list, dtype=np.int64)

    device_ids = sorted(set(dev_list))
    ap_ids = sorted(set(ap_list))
    dev_code = {d: i for i, d in enumerate(device_ids)}
    ap_code = {a: i for i, a in enumerate(ap_ids)}
    dev_idx = np.fromiter((dev_code[d] for d in dev_list), dtype=np.int32, count=n)
    ap_idx = np.fromiter((ap_code[a] for a in ap_list), dtype=np.int32, count=n)
    kind = np.asarray(kind_list, dtype=np.int8)

    # Vocabularies are sorted, so index order == lexicographic id order.
    order = np.lexsort((ap_idx, dev_idx, ts))
    return EventStream(
        ts=ts[order],
        dev_idx=dev_idx[order],
        ap_idx=ap_idx[order],
        kind=kind[order],
        device_ids=tuple(device_ids),
        ap_ids=tuple(ap_ids),
        registry=registry,
        skipped_unknown_ap=skipped_unknown_ap,
        skipped_malformed=skipped_malformed,
    )


def read_log(source: Union[str, Path, Iterable[str]], registry: Registry) -> EventStream:
    """Read a line stream (or a log file path) into a sorted EventStream.

    Malformed lines and events at access points outside the registry are
    counted and skipped, never fatal; only I/O errors raise.  Tokens are
    int-coded during the scan so a multi-million-line log parses without
    holding millions of small Python objects.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return read_log(fh, registry)

    known_ap = registry.aps
    loads = json.loads
    ts_col = array("q")
    kind_col = array("b")
    dev_col = array("i")
    ap_col = array("i")
    dev_code: dict = {}
    ap_code: dict = {}
    skipped_unknown = 0
    skipped_malformed = 0
    for line in source:
        if not line or line.isspace():
            continue
        try:
            ts, dev, ap, kind = _validate_record(loads(line))
        except (MalformedLineError, json.JSONDecodeError):
            skipped_malformed += 1
            continue
        if ap not in known_ap:
            skipped_unknown += 1
            continue
        ts_col.append(ts)
        code = dev_code.get(dev)
        if code is None:
            code = dev_code[dev] = len(dev_code)
        dev_col.append(code)
        code = ap_code.get(ap)
        if code is None:
            code = ap_code[ap] = len(ap_code)
        ap_col.append(code)
        kind_col.append(kind)

    def ranks(tokens: list) -> np.ndarray:
        r = np.empty(len(tokens), dtype=np.int32)
        r[np.argsort(np.asarray(tokens))] = np.arange(len(tokens), dtype=np.int32)
        return r

    n = len(ts_col)
    ts = np.frombuffer(ts_col, dtype=np.int64) if n else np.empty(0, dtype=np.int64)
    kind = np.frombuffer(kind_col, dtype=np.int8) if n else np.empty(0, dtype=np.int8)
    dev_tokens, ap_tokens = list(dev_code), list(ap_code)
    if n:
        dev_idx = ranks(dev_tokens)[np.frombuffer(dev_col, dtype=np.int32)]
        ap_idx = ranks(ap_tokens)[np.frombuffer(ap_col, dtype=np.int32)]
    else:
        dev_idx = np.empty(0, dtype=np.int32)
        ap_idx = np.empty(0, dtype=np.int32)

    order = np.lexsort((ap_idx, dev_idx, ts))
    return EventStream(
        ts=np.ascontiguousarray(ts[order]),
        dev_idx=np.ascontiguousarray(dev_idx[order]),
        ap_idx=np.ascontiguousarray(ap_idx[order]),
        kind=np.ascontiguousarray(kind[order]),
        device_ids=tuple(sorted(dev_tokens)),
        ap_ids=tuple(sorted(ap_tokens)),
        registry=registry,
        skipped_unknown_ap=skipped_unknown,
        skipped_malformed=skipped_malformed,
    )


def stream_from_columns(ts, dev_list, ap_list, kind, registry: Registry) -> EventStream:
    """Build a stream from pre-validated columns (generator fast path)."""
    return _sorted_stream(ts, dev_list, ap_list, kind, registry, 0, 0)


class LogTailReader:
    """Incremental reader for a live, append-only log file.

    Keeps a byte offset and a time watermark between polls.  Events more
    than LATE_TOLERANCE seconds older than the watermark are dropped and
    counted in ``dropped_late`` (out-of-order tolerance for tail mode;
    batch reads instead apply a full sort).
    """

    def __init__(self, path: Union[str, Path], registry: Registry):
        self.path = Path(path)
        self.registry = registry
        self.offset = 0
        self.watermark = None
        self.dropped_late = 0
        self.skipped_unknown_ap = 0
        self.skipped_malformed = 0
        self._ts: list[int] = []
        self._dev: list[str] = []
        self._ap: list[str] = []
        self._kind: list[int] = []

    def poll(self) -> int:
        """Consume newly appended complete lines; returns events accepted."""
        accepted = 0
        with open(self.path, "r", encoding="utf-8") as fh:
            fh.seek(self.offset)
            while True:
                pos = fh.tell()
                line = fh.readline()
                if not line:
                    break
                if not line.endswith("\n"):
                    # Partial last line: a writer is mid-append; retry next poll.
                    fh.seek(pos)
                    break
                self.offset = fh.tell()
                if line.isspace():
                    continue
                try:
                    ts, dev, ap, kind = _validate_record(json.loads(line))
                except (MalformedLineError, json.JSONDecodeError):
                    self.skipped_malformed += 1
                    continue
                if ap not in self.registry.aps:
                    self.skipped_unknown_ap += 1
                    continue
                if self.watermark is not None and ts < self.watermark - LATE_TOLERANCE:
                    self.dropped_late += 1
                    continue
                self.watermark = ts if self.watermark is None else max(self.watermark, ts)
                self._ts.append(ts)
                self._dev.append(dev)
                self._ap.append(ap)
                self._kind.append(kind)
                accepted += 1
        return accepted

    def snapshot_stream(self) -> EventStream:
        """Everything accepted so far as a sorted EventStream."""
        return _sorted_stream(
            self._ts, self._dev, self._ap, self._kind, self.registry,
            self.skipped_unknown_ap, self.skipped_malformed,
        )
