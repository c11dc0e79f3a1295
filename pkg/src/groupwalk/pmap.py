"""Deterministic fan-out of replicate ranges across worker processes.

Work is split into fixed ranges of 512 replicates and the per-range results
are concatenated in range order, so the output is byte-identical for any
worker count: randomness lives in per-replicate derived streams and the
reduction order never changes.  With workers <= 1 (or a single range) the
ranges run in-process, which also keeps tracebacks simple.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import ValidationError

CHUNK = 512


def map_ranges(fn, total: int, workers: int = 1) -> np.ndarray:
    """Concatenate fn(lo, hi) over [0, total) split into CHUNK-sized ranges.

    fn must be picklable (a module-level function or functools.partial over
    one) and return an ndarray whose leading axis has length hi - lo; the
    leading axes are concatenated in ascending range order.
    """
    if total < 1:
        raise ValidationError("total replicate count must be positive")
    if workers < 1:
        raise ValidationError("worker count must be positive")
    ranges = [(lo, min(lo + CHUNK, total)) for lo in range(0, total, CHUNK)]
    if workers == 1 or len(ranges) == 1:
        parts = [fn(lo, hi) for lo, hi in ranges]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, lo, hi) for lo, hi in ranges]
            parts = [f.result() for f in futures]
    return np.concatenate(parts, axis=0)
