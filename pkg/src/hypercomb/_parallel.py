"""Ordered fan-out used by the searches that accept ``threads``.

Work is split into chunks whose order is fixed by the caller, independent of
the worker count, so results are the same for any ``threads`` value.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, Sequence


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("HYPERCOMB_THREADS", "1")))
    except ValueError:
        return 1


def ordered_results(fn: Callable, chunks: Sequence[tuple], threads: int = 1) -> Iterator:
    """Yield ``fn(*chunk)`` in chunk order; later chunks may run ahead in worker processes."""
    if threads <= 1 or len(chunks) <= 1:
        for chunk in chunks:
            yield fn(*chunk)
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, *chunk) for chunk in chunks]
        try:
            for fut in futures:
                yield fut.result()
        finally:
            for fut in futures:
                fut.cancel()
