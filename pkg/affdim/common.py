"""
Worker pools and reproducible random streams for `affdim`.
"""
# SPDX-License-Identifier: Apache-2.0.

from concurrent.futures import ThreadPoolExecutor
import os
from typing import Callable, Iterable, List, Optional, TypeVar

import numpy as np

T = TypeVar('T')
R = TypeVar('R')

THREADS_ENV_VAR = 'AFFDIM_THREADS'


def get_worker_count() -> int:
    """
    Returns the number of workers for data-parallel tasks.

    Taken from the `AFFDIM_THREADS` environment variable when it holds a
    positive integer, otherwise the number of processors on the system.
    """
    value = os.environ.get(THREADS_ENV_VAR)
    if value:
        try:
            count = int(value)
        except ValueError:
            count = 0
        if count > 0:
            return count
    return os.cpu_count() or 1


def replica_generator(seed: int, index: int) -> np.random.Generator:
    """
    Returns an independent generator for task `index` of a run seeded with `seed`.

    Streams come from the counter-based Philox bit generator, so a task's
    draws depend only on (seed, index) and never on scheduling.
    """
    sequence = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(sequence))


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Apply `fn` to every item on a thread pool; results keep input order.

    Args:
        fn: Callable applied to each item.
        items: Inputs.
        workers (Optional[int]): Pool size. Defaults to :func:`get_worker_count`.
            A value of 1 runs inline.
    """
    items = list(items)
    if workers is None:
        workers = get_worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
