"""
Bounded concurrent fan-out for provider requests.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar, Union

T = TypeVar("T")
R = TypeVar("R")


def map_bounded(
    fn: Callable[[T], R],
    items: Sequence[T],
    max_workers: int = 1,
    return_exceptions: bool = False,
) -> List[Union[R, BaseException]]:
    """
    Apply fn to every item with at most `max_workers` calls in flight.

    Results come back in input order. Without `return_exceptions` the first
    failure in input order is raised once all calls have finished.
    """
    items = list(items)
    if max_workers <= 1 or len(items) <= 1:
        outcomes = []
        for item in items:
            try:
                outcomes.append(fn(item))
            except Exception as e:
                if not return_exceptions:
                    raise
                outcomes.append(e)
        return outcomes

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = [executor.submit(fn, item) for item in items]
        outcomes = []
        for future in futures:
            error = future.exception()
            outcomes.append(error if error is not None else future.result())

    if not return_exceptions:
        for outcome in outcomes:
            if isinstance(outcome, BaseException):
                raise outcome
    return outcomes
