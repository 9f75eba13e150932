"""Small shared utilities."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
U = TypeVar("U")


def pmap(fn: Callable[[T], U], items: Sequence[T], threads: int = 1) -> List[U]:
    """Map preserving input order; results are identical for any thread count
    (reductions downstream must consume the list in order)."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
