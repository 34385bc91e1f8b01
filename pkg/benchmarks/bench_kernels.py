"""Compare the compiled kernels against the pure-Python implementations.

Generates a synthetic trace, then times each kernel on identical inputs
for every importable backend:

    python3 benchmarks/bench_kernels.py --devices 500 --days 2
"""

import argparse
import time
from pathlib import Path

import numpy as np

from pulse._kernels import available_backends
from pulse.analytics import sessionize
from pulse.registry import load_registry
from pulse.simgen import SimConfig, generate

DATA = Path(__file__).resolve().parent.parent / "data" / "campus_demo.json"


def _timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--devices", type=int, default=500)
    parser.add_argument("--days", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    registry = load_registry(DATA)
    stream = generate(SimConfig(devices=args.devices, days=args.days,
                                seed=args.seed, registry=registry))
    sessions = sessionize(stream)
    print(f"corpus: {len(stream)} events, {sessions.session_count} sessions, "
          f"{args.devices} devices x {args.days} days")

    # kernel inputs: event columns ordered by (device, ts), session columns
    order = np.argsort(stream.dev_idx, kind="stable")
    ap_to_bld = np.asarray(
        [sorted(registry.buildings).index(registry.aps[a].building_id)
         for a in stream.ap_ids], dtype=np.int32)
    ev_args = (stream.ts[order], stream.dev_idx[order],
               ap_to_bld[stream.ap_idx[order]], stream.kind[order], 600)
    span = (stream.first_ts() // 300) * 300, -(-stream.last_ts() // 300) * 300
    bin_args = (sessions.dev, sessions.bld, sessions.start, sessions.end,
                len(sessions.building_ids), span[0], span[1], 300)
    mv_args = (sessions.dev, sessions.bld, sessions.start, sessions.end,
               stream.first_ts(), stream.last_ts(), 1800)

    backends = available_backends()
    cases = [
        ("sessionize_scan", ev_args),
        ("bin_rows", bin_args),
        ("movement_pairs", mv_args),
    ]
    results = {}
    for kernel, call_args in cases:
        for name, mod in backends.items():
            fn = getattr(mod, kernel)
            results[(kernel, name)] = _timeit(lambda: fn(*call_args), args.repeat)

    width = max(len(k) for k, _ in cases)
    header = f"{'kernel':<{width}}  " + "".join(f"{n:>12}" for n in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for kernel, _ in cases:
        row = f"{kernel:<{width}}  "
        for name in backends:
            row += f"{results[(kernel, name)] * 1000:>10.2f}ms"
        if "python" in backends and "cython" in backends:
            ratio = results[(kernel, "python")] / results[(kernel, "cython")]
            row += f"{ratio:>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
