"""
projclust utilities package
"""

from functools import wraps
import time
import logging

logger = logging.getLogger(__name__)


class ProjClustError(Exception):
    """Base class for every error raised by projclust"""
    pass


class InvalidInputError(ProjClustError, ValueError):
    """Raised when an operation's precondition is violated"""
    pass


class SizeGuardError(ProjClustError):
    """Raised when an exhaustive oracle is asked for an instance above its size guard"""

    def __init__(self, operation, n, max_n):
        self.operation = operation
        self.n = n
        self.max_n = max_n
        super().__init__(f"{operation} refused: n={n} exceeds the size guard max_n={max_n}")


class ParseError(ProjClustError, ValueError):
    """Raised when a point file cannot be parsed; carries the 1-based line number"""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = f"{path}:" if path else ""
        where += f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ConfigError(ProjClustError, ValueError):
    """Raised when an experiment or command configuration is invalid"""
    pass


def timed(func):
    """
    Decorator returning (result, elapsed_ms) measured on the monotonic clock
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        logger.debug(f"{func.__name__} took {elapsed_ms:.2f}ms")
        return result, elapsed_ms
    return wrapper
