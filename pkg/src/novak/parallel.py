"""Deterministic chunked map over an integer range."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def _bounds(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    size = max(1, -(-(hi - lo) // parts))
    return [(a, min(a + size, hi)) for a in range(lo, hi, size)]


def map_chunks(func, lo: int, hi: int, workers: int = 1, *args) -> list:
    """Concatenate ``func(a, b, *args)`` over a partition of [lo, hi).

    Chunks are merged in range order, so the output is the same for any
    worker count. ``func`` must be a module-level function when workers > 1.
    """
    if hi <= lo:
        return []
    if workers <= 1:
        return list(func(lo, hi, *args))
    chunks = _bounds(lo, hi, workers * 4)
    out: list = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(func, a, b, *args) for a, b in chunks]
        for fut in futures:
            out.extend(fut.result())
    return out
