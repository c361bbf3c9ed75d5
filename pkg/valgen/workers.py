"""
Workers Module
Ordered batch execution over a thread pool
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, List, Optional, TypeVar

from config.config import config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def batches(items: Iterable[T], batch_size: int) -> Iterator[List[T]]:
    batch: List[T] = []
    for item in items:
        batch.append(item)
        if len(batch) >= batch_size:
            yield batch
            batch = []
    if batch:
        yield batch


def batched_map(
    func: Callable[[T], R],
    items: Iterable[T],
    max_workers: Optional[int] = None,
    batch_size: Optional[int] = None,
) -> Iterator[R]:
    """
    Apply func to every item, yielding results in input order

    Args:
        func: Pure per-item function
        items: Possibly lazy input sequence
        max_workers: Pool size; 1 runs sequentially in the caller's thread
        batch_size: Items submitted per round

    Returns:
        Iterator of results; callers may stop early between batches
    """
    max_workers = max_workers or config.MAX_WORKERS
    batch_size = batch_size or config.BATCH_SIZE

    if max_workers == 1:
        for item in items:
            yield func(item)
        return

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        for number, batch in enumerate(batches(items, batch_size)):
            logger.debug(f"Running batch {number} of {len(batch)} items on {max_workers} workers")
            yield from executor.map(func, batch)
