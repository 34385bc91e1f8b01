"""Synthetic campus trace generator.

Real association logs are not redistributable, so tests and demos run on
generated ones.  Each simulated device is one person following a plain
daily routine (sleep in a dorm, classes in 1-2 h blocks, lunch, maybe an
evening in the library); the point is to produce the diurnal peaks and
lunch-hour flows the displays are about, not mobility realism.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .events import KIND_CONNECT, KIND_DISCONNECT, KIND_POLL, EventStream
from .registry import Category, Registry

# 2019-04-01 00:00:00 UTC, a Monday at midnight.
DEFAULT_START_TS = 1554076800

DAY = 86400

POLL_INTERVAL = 300
POLL_JITTER = 60

# the schedule needs somewhere to sleep, study, eat and read
REQUIRED_CATEGORIES = (
    Category.DORMITORY, Category.ACADEMIC, Category.CANTEEN, Category.LIBRARY,
)

_MORNING_LEAVE = 8 * 3600 + 1800   # 08:30, plus up to 30 min
_LUNCH_START = 12 * 3600           # noon
_LUNCH_END = 13 * 3600
_DAY_END = 17 * 3600               # 17:00, plus up to 30 min
_LIBRARY_END = 21 * 3600           # 21:00, plus up to 90 min
_MIN_BLOCK = 900                   # don't bother connecting for less
_LUNCH_P = 0.8
_LIBRARY_P = 0.4


class SimConfigError(ValueError):
    """The registry cannot support the simulated schedule."""


@dataclass(frozen=True)
class SimConfig:
    devices: int
    days: int
    seed: int
    registry: Registry
    start_ts: int = DEFAULT_START_TS

    def __post_init__(self):
        if self.devices < 0:
            raise SimConfigError(f"devices must be >= 0, got {self.devices}")
        if self.days < 1:
            raise SimConfigError(f"days must be >= 1, got {self.days}")
        if self.start_ts < 0:
            raise SimConfigError(f"start_ts must be >= 0, got {self.start_ts}")


def device_token(seed: int, index: int) -> str:
    """Opaque per-device id, stable for a given (seed, index)."""
    digest = hashlib.blake2b(f"{seed}:{index}".encode(), digest_size=8)
    return digest.hexdigest()


def _category_pools(registry: Registry) -> dict:
    """Buildings usable per category: registered and carrying an access point."""
    with_aps = {ap.building_id for ap in registry.aps.values()}
    pools: dict = {}
    for cat in REQUIRED_CATEGORIES:
        pool = [b for b in registry.building_ids()
                if registry.buildings[b].category is cat and b in with_aps]
        if not pool:
            raise SimConfigError(
                f"registry has no {cat.value} building with an access point")
        pools[cat] = pool
    return pools


def _walk(rng) -> int:
    return 60 + int(rng.integers(0, 241))


def _fill_blocks(rng, blocks, pool, cursor: int, until: int) -> int:
    """Append 1-2 h blocks at random pool buildings over [cursor, until)."""
    while until - cursor >= _MIN_BLOCK:
        length = 3600 + int(rng.integers(0, 3601))
        end = min(cursor + length, until)
        blocks.append((pool[int(rng.integers(0, len(pool)))], cursor, end))
        cursor = end + _walk(rng)
    return cursor


def _device_blocks(rng, config: SimConfig, pools: dict) -> list:
    """(building_id, arrive, depart) presence blocks for one device."""
    start, end = config.start_ts, config.start_ts + config.days * DAY
    dorm = pools[Category.DORMITORY][int(rng.integers(0, len(pools[Category.DORMITORY])))]
    acad = pools[Category.ACADEMIC]

    blocks: list = []
    dorm_from = start + int(rng.integers(0, 121))
    for day in range(config.days):
        day0 = start + day * DAY
        leave = day0 + _MORNING_LEAVE + int(rng.integers(0, 1801))
        blocks.append((dorm, dorm_from, leave))
        cursor = leave + _walk(rng)
        day_end = day0 + _DAY_END + int(rng.integers(0, 1801))

        if rng.random() < _LUNCH_P:
            canteen = pools[Category.CANTEEN][
                int(rng.integers(0, len(pools[Category.CANTEEN])))]
            l_start = day0 + _LUNCH_START + int(rng.integers(0, 301))
            l_end = day0 + _LUNCH_END - int(rng.integers(0, 301))
            cursor = _fill_blocks(rng, blocks, acad, cursor, l_start - 120)
            blocks.append((canteen, max(cursor, l_start), l_end))
            cursor = l_end + _walk(rng)
        cursor = _fill_blocks(rng, blocks, acad, cursor, day_end)

        if rng.random() < _LIBRARY_P:
            library = pools[Category.LIBRARY][
                int(rng.integers(0, len(pools[Category.LIBRARY])))]
            lib_end = day0 + _LIBRARY_END + int(rng.integers(0, 5401))
            blocks.append((library, cursor, lib_end))
            cursor = lib_end + _walk(rng)
        dorm_from = cursor
    blocks.append((dorm, dorm_from, end))
    return blocks


def generate(config: SimConfig) -> EventStream:
    """Deterministic synthetic stream: same config, same events.

    Per presence block a device connects on arrival, polls every
    POLL_INTERVAL s with +-POLL_JITTER jitter, and disconnects on
    departure; per-device timestamps strictly increase.
    """
    registry = config.registry
    pools = _category_pools(registry)
    ap_vocab = sorted(registry.aps)
    aps_of: dict = {b: [] for b in registry.buildings}
    for i, ap_id in enumerate(ap_vocab):
        aps_of[registry.aps[ap_id].building_id].append(i)

    rng = np.random.default_rng(config.seed)
    ts_parts: list = []
    ap_parts: list = []
    kind_parts: list = []
    dev_parts: list = []

    for dev_i in range(config.devices):
        for building, arrive, depart in _device_blocks(rng, config, pools):
            choices = aps_of[building]
            ap_i = choices[int(rng.integers(0, len(choices)))]
            n_polls = max((depart - arrive) // POLL_INTERVAL, 0)
            if n_polls:
                polls = (arrive
                         + POLL_INTERVAL * np.arange(1, n_polls + 1, dtype=np.int64)
                         + rng.integers(-POLL_JITTER, POLL_JITTER + 1, size=n_polls))
                polls = polls[polls < depart]
            else:
                polls = np.empty(0, dtype=np.int64)
            n = len(polls) + 2
            ts_blk = np.empty(n, dtype=np.int64)
            ts_blk[0] = arrive
            ts_blk[1:-1] = polls
            ts_blk[-1] = depart
            kind_blk = np.full(n, KIND_POLL, dtype=np.int8)
            kind_blk[0] = KIND_CONNECT
            kind_blk[-1] = KIND_DISCONNECT
            ts_parts.append(ts_blk)
            kind_parts.append(kind_blk)
            ap_parts.append(np.full(n, ap_i, dtype=np.int32))
            dev_parts.append(np.full(n, dev_i, dtype=np.int32))

    if not ts_parts:
        return EventStream(
            ts=np.empty(0, dtype=np.int64), dev_idx=np.empty(0, dtype=np.int32),
            ap_idx=np.empty(0, dtype=np.int32), kind=np.empty(0, dtype=np.int8),
            device_ids=(), ap_ids=(), registry=registry,
        )

    ts = np.concatenate(ts_parts)
    dev_tmp = np.concatenate(dev_parts)
    ap_tmp = np.concatenate(ap_parts)
    kind = np.concatenate(kind_parts)

    # remap device index -> rank of its token in the sorted vocabulary
    tokens = [device_token(config.seed, i) for i in range(config.devices)]
    token_rank = np.empty(config.devices, dtype=np.int32)
    token_rank[np.argsort(tokens)] = np.arange(config.devices, dtype=np.int32)
    dev_idx = token_rank[dev_tmp]

    # drop access points that never appear so the vocabulary matches a re-read
    used = np.unique(ap_tmp)
    ap_idx = np.searchsorted(used, ap_tmp).astype(np.int32)
    ap_ids = tuple(ap_vocab[int(u)] for u in used)

    order = np.lexsort((ap_idx, dev_idx, ts))
    return EventStream(
        ts=ts[order], dev_idx=dev_idx[order], ap_idx=ap_idx[order],
        kind=kind[order].astype(np.int8),
        device_ids=tuple(sorted(tokens)), ap_ids=ap_ids, registry=registry,
    )


_KIND_TOKEN = {KIND_CONNECT: "connect", KIND_POLL: "poll", KIND_DISCONNECT: "disconnect"}


def write_log(stream: EventStream, path: Union[str, Path]) -> None:
    """Write the stream in the ingest log format (one JSON record per line)."""
    dev_json = [json.dumps(d) for d in stream.device_ids]
    ap_json = [json.dumps(a) for a in stream.ap_ids]
    ts, dev, ap, kind = stream.ts, stream.dev_idx, stream.ap_idx, stream.kind
    with open(path, "w", encoding="utf-8") as fh:
        chunk: list = []
        for i in range(len(ts)):
            chunk.append(
                f'{{"ts":{ts[i]},"dev":{dev_json[dev[i]]},'
                f'"ap":{ap_json[ap[i]]},"ev":"{_KIND_TOKEN[int(kind[i])]}"}}'
            )
            if len(chunk) == 65536:
                fh.write("\n".join(chunk))
                fh.write("\n")
                chunk.clear()
        if chunk:
            fh.write("\n".join(chunk))
            fh.write("\n")


__all__ = [
    "DEFAULT_START_TS",
    "SimConfig",
    "SimConfigError",
    "device_token",
    "generate",
    "write_log",
]
