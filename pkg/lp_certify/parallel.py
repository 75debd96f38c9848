"""
Order-preserving map over a process pool.
"""

import logging
from concurrent.futures import ProcessPoolExecutor

logger = logging.getLogger(__name__)


def parallel_map(fn, items, workers: int = 1) -> list:
    """Apply fn to every item; results come back in input order.

    With ``workers <= 1`` everything runs in this process. fn and the
    items must be picklable otherwise.
    """
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    logger.debug(f"Dispatching {len(items)} tasks to {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
