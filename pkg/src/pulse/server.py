"""The Pulse daemon: request API plus push stream over one event loop.

One producer task rebuilds the display payload every ``refresh`` virtual
seconds and swaps it in atomically; request handlers and stream
subscribers only ever read immutable published values, so there is no
locking anywhere.
"""

from __future__ import annotations

import asyncio
import os
import socket
import sys
import time
import traceback
from contextlib import asynccontextmanager
from dataclasses import dataclass
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from .analytics import (
    SessionSet,
    SnapshotParams,
    bin_series,
    sessionize,
    snapshot_from_sessions,
)
from .encoding import EncodingParams, build_display_payload
from .events import EventStream, LogTailReader
from .registry import Registry, dump_registry
from .serialize import dumps, envelope_to_dict, series_to_dict

DEFAULT_PORT = 8080
MAX_HISTORY_HOURS = 168

# Wall seconds the replay producer waits before its first tick, so stream
# clients started together with the server catch frame zero.
STREAM_WARMUP_ENV = "PULSE_STREAM_WARMUP"
DEFAULT_STREAM_WARMUP = 0.5


@dataclass(frozen=True)
class ServeConfig:
    registry_path: str
    log_path: str
    replay: bool = False
    speed: float = 1.0
    refresh: int = 60
    port: int = DEFAULT_PORT

    def __post_init__(self):
        if self.speed <= 0:
            raise ValueError(f"speed must be positive, got {self.speed}")
        if self.refresh < 1:
            raise ValueError(f"refresh must be >= 1, got {self.refresh}")


class _Hub:
    """Latest published state plus stream fan-out.

    ``current`` is replaced wholesale (publish) and read once per request
    (handlers), which is the whole atomic-swap story on a single loop.
    """

    def __init__(self):
        self.current: Optional[tuple] = None  # (envelope_json, sessions, virtual_now)
        self.subscribers: set = set()
        self.finished = False

    def publish(self, envelope_json: str, sessions: SessionSet, virtual_now: int):
        self.current = (envelope_json, sessions, virtual_now)
        for q in list(self.subscribers):
            q.put_nowait(envelope_json)

    def finish(self):
        self.finished = True
        for q in list(self.subscribers):
            q.put_nowait(None)


def _publish_tick(app: FastAPI, sessions: SessionSet, virtual_now: int):
    registry = app.state.registry
    snap = snapshot_from_sessions(sessions, registry, virtual_now,
                                  app.state.snapshot_params)
    payload = build_display_payload(snap, registry, app.state.encoding_params)
    app.state.hub.publish(dumps(envelope_to_dict(payload, virtual_now)),
                          sessions, virtual_now)


async def _replay_producer(app: FastAPI):
    """Fixed tick grid over the log's time span, paced by speed.

    Virtual times are a pure function of the log and config; pacing only
    decides when each tick fires, never what it contains, so reruns push
    byte-identical frame sequences.  When a tick overruns its slot the
    producer catches up without sleeping (but still yields).
    """
    config: ServeConfig = app.state.config
    stream: EventStream = app.state.stream
    sessions = await asyncio.to_thread(sessionize, stream,
                                       app.state.snapshot_params.idle_timeout)
    t0 = stream.first_ts()
    ticks = (stream.last_ts() - t0) // config.refresh + 1
    warmup = float(os.environ.get(STREAM_WARMUP_ENV, DEFAULT_STREAM_WARMUP))
    loop = asyncio.get_running_loop()
    wall0 = loop.time() + warmup
    for k in range(ticks):
        delay = wall0 + k * config.refresh / config.speed - loop.time()
        await asyncio.sleep(delay if delay > 0 else 0)
        _publish_tick(app, sessions, t0 + k * config.refresh)
    app.state.hub.finish()


async def _live_producer(app: FastAPI):
    """Tail the log and republish every ``refresh`` wall seconds."""
    config: ServeConfig = app.state.config
    reader = LogTailReader(config.log_path, app.state.registry)
    idle_timeout = app.state.snapshot_params.idle_timeout
    loop = asyncio.get_running_loop()
    while True:
        started = loop.time()
        virtual_now = int(time.time())
        await asyncio.to_thread(reader.poll)
        sessions = await asyncio.to_thread(
            sessionize, reader.snapshot_stream(), idle_timeout)
        _publish_tick(app, sessions, virtual_now)
        await asyncio.sleep(max(config.refresh - (loop.time() - started), 0.05))


async def _run_producer(app: FastAPI):
    try:
        if app.state.config.replay:
            await _replay_producer(app)
        else:
            await _live_producer(app)
    except asyncio.CancelledError:
        raise
    except Exception:
        traceback.print_exc(file=sys.stderr)


def create_app(
    config: ServeConfig,
    registry: Registry,
    stream: Optional[EventStream] = None,
    snapshot_params: Optional[SnapshotParams] = None,
    encoding_params: Optional[EncodingParams] = None,
) -> FastAPI:
    """Wire the application; replay mode needs the pre-read stream."""
    if config.replay:
        if stream is None or len(stream) == 0:
            raise ValueError("replay mode needs a non-empty event log")

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(_run_producer(app))
        try:
            yield
        finally:
            task.cancel()
            try:
                await task
            except asyncio.CancelledError:
                pass

    app = FastAPI(title="pulse", lifespan=lifespan)
    app.state.config = config
    app.state.registry = registry
    app.state.stream = stream
    app.state.snapshot_params = snapshot_params or SnapshotParams()
    app.state.encoding_params = encoding_params or EncodingParams()
    app.state.hub = _Hub()

    def current_or_503() -> tuple:
        current = app.state.hub.current
        if current is None:
            raise HTTPException(
                status_code=503,
                detail="no payload yet: first refresh pending, retry shortly",
                headers={"Retry-After": str(config.refresh)},
            )
        return current

    @app.get("/api/v1/payload")
    def payload() -> Response:
        envelope_json, _, _ = current_or_503()
        return Response(content=envelope_json, media_type="application/json")

    @app.get("/api/v1/buildings")
    def buildings() -> JSONResponse:
        return JSONResponse(dump_registry(registry))

    @app.get("/api/v1/buildings/{building_id}/history")
    def history(building_id: str, hours: int = 24) -> JSONResponse:
        if building_id not in registry.buildings:
            raise HTTPException(status_code=404,
                                detail=f"unknown building {building_id!r}")
        if not 1 <= hours <= MAX_HISTORY_HOURS:
            raise HTTPException(
                status_code=400,
                detail=f"hours must be in [1, {MAX_HISTORY_HOURS}], got {hours}")
        _, sessions, virtual_now = current_or_503()
        series = bin_series(sessions, building_id,
                            virtual_now - hours * 3600, virtual_now,
                            app.state.snapshot_params.bin_width,
                            registry=registry)
        return JSONResponse(series_to_dict(series))

    @app.get("/healthz")
    def healthz() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.websocket("/api/v1/stream")
    async def stream_endpoint(ws: WebSocket):
        await ws.accept()
        hub: _Hub = app.state.hub
        if hub.finished:
            await ws.close()
            return
        queue: asyncio.Queue = asyncio.Queue()
        hub.subscribers.add(queue)
        try:
            while True:
                frame = await queue.get()
                if frame is None:
                    break
                await ws.send_text(frame)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            hub.subscribers.discard(queue)
        try:
            await ws.close()
        except RuntimeError:
            pass

    return app


def serve(
    config: ServeConfig,
    registry: Registry,
    stream: Optional[EventStream] = None,
) -> int:
    """Run the daemon until interrupted. Returns a process exit code."""
    import uvicorn

    app = create_app(config, registry, stream)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind(("0.0.0.0", config.port))
    except OSError as exc:
        sock.close()
        print(f"pulse: cannot bind port {config.port}: {exc}", file=sys.stderr)
        return 1
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning", lifespan="on"))
    try:
        server.run(sockets=[sock])
    except KeyboardInterrupt:
        pass
    finally:
        sock.close()
    return 0
