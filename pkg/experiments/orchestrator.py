"""
Shard orchestrator for Monte Carlo runs.
Runs independent shard jobs as concurrent async tasks on worker threads.
"""
import asyncio
import logging
from typing import Callable, List, Optional, Sequence, TypeVar

from core.errors import InvalidConfigError
from core.settings import DEFAULT_WORKERS

logger = logging.getLogger(__name__)

T = TypeVar("T")


class ShardOrchestrator:
    """
    Central coordinator for shard jobs.
    At most `workers` jobs run at once; results come back in submission order.
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = DEFAULT_WORKERS if workers is None else workers
        if self.workers < 1:
            raise InvalidConfigError(f"workers must be >= 1, got {self.workers}")
        self.completed = 0
        logger.debug(f"ShardOrchestrator initialized with {self.workers} workers")

    async def _run_job(self, semaphore: asyncio.Semaphore, job: Callable[[], T]) -> T:
        async with semaphore:
            result = await asyncio.to_thread(job)
        self.completed += 1
        return result

    async def run(self, jobs: Sequence[Callable[[], T]]) -> List[T]:
        """Start every job as an async task and gather the results."""
        semaphore = asyncio.Semaphore(self.workers)
        tasks = [asyncio.create_task(self._run_job(semaphore, job)) for job in jobs]
        try:
            return list(await asyncio.gather(*tasks))
        except BaseException:
            for task in tasks:
                task.cancel()
            await asyncio.gather(*tasks, return_exceptions=True)
            logger.error(f"Shard run aborted after {self.completed} completed jobs")
            raise
