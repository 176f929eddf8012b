import time
from functools import wraps
from typing import Any, Dict, Optional

from loguru import logger


class PerformanceContext:
    """Context manager for tracking performance of code blocks"""

    def __init__(self, operation_name: str, metadata: Optional[Dict[str, Any]] = None):
        self.operation_name = operation_name
        self.metadata = metadata or {}
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        logger.debug(f"Starting {self.operation_name}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.end_time = time.perf_counter()
        _log_performance(
            self.operation_name, self.duration, self.metadata, exc_type is None
        )
        return False  # Don't suppress exceptions

    @property
    def duration(self) -> float:
        if self.start_time is None:
            return 0.0
        end = self.end_time if self.end_time is not None else time.perf_counter()
        return end - self.start_time


def track_performance(operation_name: str, metadata: Optional[Dict[str, Any]] = None):
    """Decorator for tracking performance of functions"""

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            with PerformanceContext(operation_name, metadata):
                return func(*args, **kwargs)

        return wrapper

    return decorator


def format_duration(duration: float) -> str:
    """Render a duration the way the performance log does"""
    if duration < 1:
        return f"{duration:.3f}s"
    if duration < 60:
        return f"{duration:.1f}s"
    minutes = int(duration // 60)
    seconds = duration % 60
    return f"{minutes}m{seconds:.1f}s"


def _log_performance(
    operation_name: str, duration: float, metadata: Dict[str, Any], success: bool
) -> None:
    """Internal function to log performance metrics"""
    duration_str = format_duration(duration)

    # Log with appropriate level based on duration and success
    if not success:
        logger.warning(f"{operation_name} aborted after {duration_str}")
    elif duration > 60:
        logger.warning(f"{operation_name} completed in {duration_str} (slow)")
    elif duration > 5:
        logger.info(f"{operation_name} completed in {duration_str}")
    else:
        logger.debug(f"{operation_name} completed in {duration_str}")

    if metadata:
        logger.debug(f"{operation_name} metadata: {metadata}")


__all__ = ["track_performance", "PerformanceContext", "format_duration"]
