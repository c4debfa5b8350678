"""Per-sample work fan-out, capped by the RULED_SLANT_THREADS env var.

Every per-sample computation in the pipeline is a pure function, so mapping
over a grid is safe to parallelize.  The default cap is 1 (plain map);
results always come back in input order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "RULED_SLANT_THREADS"


def thread_cap() -> int:
    raw = os.environ.get(ENV_VAR, "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def parallel_map(fn, items):
    items = list(items)
    cap = thread_cap()
    if cap <= 1 or len(items) < 4:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, items))
