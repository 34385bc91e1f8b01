"""``pulse`` command line: gen / analyze / serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .analytics import SnapshotParams, sessionize, snapshot_from_sessions
from .events import read_log
from .registry import load_registry
from .serialize import snapshot_to_dict
from .server import DEFAULT_PORT, ServeConfig, serve
from .simgen import DEFAULT_START_TS, SimConfig, generate, write_log


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pulse",
        description="Campus crowd display service over Wi-Fi association logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic association log")
    gen.add_argument("--devices", type=int, default=500,
                     help="simulated devices (default 500)")
    gen.add_argument("--days", type=int, default=1,
                     help="simulated days (default 1)")
    gen.add_argument("--seed", type=int, default=0,
                     help="generator seed (default 0)")
    gen.add_argument("--start-ts", type=int, default=DEFAULT_START_TS,
                     help="simulation start, unix seconds at midnight UTC")
    gen.add_argument("--registry", required=True, help="registry JSON path")
    gen.add_argument("--out", required=True, help="output log path")
    gen.set_defaults(handler=_cmd_gen)

    analyze = sub.add_parser("analyze", help="print snapshot JSON for given instants")
    analyze.add_argument("--log", required=True, help="association log path")
    analyze.add_argument("--registry", required=True, help="registry JSON path")
    analyze.add_argument("--at", type=int, action="append", required=True,
                         metavar="TS",
                         help="unix seconds to evaluate at; repeatable, the log "
                              "is parsed once (one JSON document per line when "
                              "given more than once)")
    analyze.set_defaults(handler=_cmd_analyze)

    srv = sub.add_parser("serve", help="run the payload service")
    srv.add_argument("--log", required=True, help="association log path")
    srv.add_argument("--registry", required=True, help="registry JSON path")
    srv.add_argument("--replay", action="store_true",
                     help="replay the log on a virtual clock instead of tailing it")
    srv.add_argument("--speed", type=float, default=1.0,
                     help="replay speed, virtual seconds per wall second (default 1)")
    srv.add_argument("--refresh", type=int, default=60,
                     help="virtual seconds between snapshots (default 60)")
    srv.add_argument("--port", type=int, default=None,
                     help=f"TCP port (default $PULSE_PORT or {DEFAULT_PORT})")
    srv.set_defaults(handler=_cmd_serve)

    return parser


def _cmd_gen(args, parser: argparse.ArgumentParser) -> int:
    registry = load_registry(args.registry)
    stream = generate(SimConfig(devices=args.devices, days=args.days,
                                seed=args.seed, registry=registry,
                                start_ts=args.start_ts))
    write_log(stream, args.out)
    print(f"wrote {len(stream)} events to {args.out}", file=sys.stderr)
    return 0


def _cmd_analyze(args, parser: argparse.ArgumentParser) -> int:
    registry = load_registry(args.registry)
    stream = read_log(args.log, registry)
    params = SnapshotParams()
    sessions = sessionize(stream, params.idle_timeout)
    docs = [
        snapshot_to_dict(snapshot_from_sessions(sessions, registry, at, params))
        for at in args.at
    ]
    if len(docs) == 1:
        print(json.dumps(docs[0], indent=2))
    else:
        for doc in docs:
            print(json.dumps(doc, separators=(",", ":")))
    return 0


def _resolve_port(args, parser: argparse.ArgumentParser) -> int:
    if args.port is not None:
        return args.port
    env = os.environ.get("PULSE_PORT")
    if env:
        try:
            return int(env)
        except ValueError:
            parser.error(f"PULSE_PORT must be an integer, got {env!r}")
    return DEFAULT_PORT


def _cmd_serve(args, parser: argparse.ArgumentParser) -> int:
    if args.speed <= 0:
        parser.error("--speed must be positive")
    if args.refresh < 1:
        parser.error("--refresh must be >= 1")
    port = _resolve_port(args, parser)
    registry = load_registry(args.registry)
    stream = None
    if args.replay:
        stream = read_log(args.log, registry)
        if len(stream) == 0:
            print("pulse: replay mode needs a non-empty log", file=sys.stderr)
            return 1
    elif not os.path.exists(args.log):
        print(f"pulse: log file not found: {args.log}", file=sys.stderr)
        return 1
    config = ServeConfig(registry_path=args.registry, log_path=args.log,
                         replay=args.replay, speed=args.speed,
                         refresh=args.refresh, port=port)
    return serve(config, registry, stream)


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except KeyboardInterrupt:
        return 130
    except Exception as exc:
        print(f"pulse: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
