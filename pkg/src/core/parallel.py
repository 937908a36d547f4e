# Fan-out of independent chunk jobs over worker processes
import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


async def _gather_chunks(fn: Callable[[T], R], jobs_args: Sequence[T], workers: int) -> List[R]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        tasks = [loop.run_in_executor(pool, fn, args) for args in jobs_args]
        results = await asyncio.gather(*tasks, return_exceptions=True)
    for result in results:
        if isinstance(result, BaseException):
            raise result
    return list(results)


def run_chunks(fn: Callable[[T], R], jobs_args: Sequence[T], workers: int = 1) -> List[R]:
    """
    Apply `fn` to every argument tuple and return results in input order.

    With one worker everything runs in this process; `fn` must be a module-level
    function so it can be sent to worker processes.
    """
    if workers <= 1 or len(jobs_args) <= 1:
        return [fn(args) for args in jobs_args]
    logger.debug("Dispatching %d chunks to %d workers", len(jobs_args), workers)
    return asyncio.run(_gather_chunks(fn, jobs_args, workers))
