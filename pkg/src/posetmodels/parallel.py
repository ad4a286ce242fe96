"""Deterministic chunked multiprocessing helper.

Work is split into ordered chunks; chunk results come back in submission
order, so output never depends on the worker count.
"""

from __future__ import annotations

from multiprocessing import get_context
from typing import Callable, Sequence


def run_chunked(fn: Callable, chunk_args: Sequence, jobs: int) -> list:
    """Apply ``fn`` to each element of ``chunk_args``, in order.

    ``fn`` must be a module-level function.  With ``jobs`` <= 1, or a
    single chunk, everything runs in-process.
    """
    if jobs <= 1 or len(chunk_args) <= 1:
        return [fn(a) for a in chunk_args]
    ctx = get_context("fork")
    with ctx.Pool(processes=min(jobs, len(chunk_args))) as pool:
        return pool.map(fn, chunk_args)
