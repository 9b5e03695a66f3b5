"""
Deterministic parallel map for embarrassingly parallel sweeps.

Results always come back in input order, so reductions over them (min by
value, then lowest index) do not depend on the worker count.
"""

from typing import Callable, Iterable, List, TypeVar

from joblib import Parallel, delayed

from .solver_config import get_setting, SettingKey

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: int | None = None) -> int:
    """0 means machine parallelism (joblib's -1); None reads the setting."""
    if workers is None:
        workers = int(get_setting(SettingKey.WORKERS))
    return -1 if workers == 0 else workers


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> List[R]:
    """
    Apply func to every item, in threads when more than one worker is allowed.

    Threads (not processes) are used: the work is numpy-bound and the callables
    are often closures that cannot be pickled.
    """
    items = list(items)
    n_jobs = resolve_workers(workers)
    if n_jobs == 1 or len(items) <= 1:
        return [func(item) for item in items]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(func)(item) for item in items)
