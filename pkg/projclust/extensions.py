"""
projclust Extensions
Centralized process-wide singletons, initialised from the active config.
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor

logger = logging.getLogger(__name__)

# Set while a pool worker runs a task
_worker_state = threading.local()


class WorkerPool:
    """Thread pool with ordered results; numpy kernels release the GIL"""

    def __init__(self, threads=1):
        self.threads = threads
        self._executor = None

    def init_app(self, config_class):
        """Resize the pool for the given configuration"""
        threads = config_class.resolved_threads()
        if threads != self.threads:
            self.shutdown()
            self.threads = threads
        logger.debug(f"Worker pool sized to {self.threads} thread(s)")

    def _get_executor(self):
        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=self.threads,
                                                thread_name_prefix='projclust')
        return self._executor

    def map_ordered(self, fn, items):
        """
        Apply fn to every item; results come back in input order

        Calls made from inside a pool task run inline: the outer map already
        holds the workers, and queueing behind them would never finish.
        """
        items = list(items)
        if self.threads <= 1 or len(items) <= 1 or in_worker():
            return [fn(item) for item in items]

        def run(item):
            _worker_state.active = True
            try:
                return fn(item)
            finally:
                _worker_state.active = False

        return list(self._get_executor().map(run, items))

    def shutdown(self):
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None


def in_worker():
    """True on a thread that is running a pool task"""
    return getattr(_worker_state, 'active', False)


# Initialize extensions as singletons
pool = WorkerPool()


class RuntimeSettings:
    """Numeric knobs read once from the active config"""

    def __init__(self):
        self.distance_block = 2 ** 22
        self.cache_distances = False

    def init_app(self, config_class):
        self.distance_block = max(1, int(config_class.DISTANCE_BLOCK))
        self.cache_distances = bool(config_class.CACHE_DISTANCES)


runtime = RuntimeSettings()
