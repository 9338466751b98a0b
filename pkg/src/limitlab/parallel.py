"""Thread fan-out shared by the matrix runners and the samplers."""

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import PreconditionError


def thread_count():
    """Worker threads from ``LIMITLAB_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("LIMITLAB_THREADS", "0").strip() or "0"
    try:
        k = int(raw)
    except ValueError:
        raise PreconditionError(f"LIMITLAB_THREADS must be an integer, got {raw!r}") from None
    if k < 0:
        raise PreconditionError("LIMITLAB_THREADS must be nonnegative")
    return k or (os.cpu_count() or 1)


def pmap(fn, items, threads=None):
    """``list(map(fn, items))``, spread over threads; output order matches input."""
    items = list(items)
    threads = thread_count() if threads is None else max(1, int(threads))
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))
